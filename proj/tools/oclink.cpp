// oclink: closed-form BER floors and Monte Carlo runs for one-tap NLMS
// carrier phase recovery in n-PSK coherent links.

#include <oclink/analytics.hpp>
#include <oclink/montecarlo.hpp>
#include <oclink/report.hpp>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace oclink;

struct LinkFlags {
  int n = 4;
  double lw_tx = 0.0;
  double lw_lo = 0.0;
  double baud = 28e9;
  double disp = 16.0;
  double length_km = 0.0;
  double lambda_nm = 1550.0;
};

void add_link_flags(CLI::App* app, LinkFlags& f) {
  app->add_option("--n", f.n, "Constellation size (power of two)")->check(CLI::PositiveNumber);
  app->add_option("--lw-tx", f.lw_tx, "Tx laser 3-dB linewidth [Hz]")->check(CLI::NonNegativeNumber);
  app->add_option("--lw-lo", f.lw_lo, "LO laser 3-dB linewidth [Hz]")->check(CLI::NonNegativeNumber);
  app->add_option("--baud", f.baud, "Symbol rate [Baud]")->check(CLI::PositiveNumber);
  app->add_option("--disp", f.disp, "Dispersion coefficient [ps/(nm km)]");
  app->add_option("--length-km", f.length_km, "Fiber length [km]")->check(CLI::NonNegativeNumber);
  app->add_option("--lambda-nm", f.lambda_nm, "Carrier wavelength [nm]")->check(CLI::PositiveNumber);
}

void apply_link_flags(const CLI::App* app, const LinkFlags& f, LinkParams& link, bool only_given) {
  auto given = [&](const char* name) { return !only_given || app->count(name) > 0; };
  if (given("--n")) link.order = ModOrder(f.n);
  if (given("--lw-tx")) link.lw_tx = f.lw_tx;
  if (given("--lw-lo")) link.lw_lo = f.lw_lo;
  if (given("--baud")) link.ts = 1.0 / f.baud;
  if (given("--disp")) link.disp = dispersion_si(f.disp);
  if (given("--length-km")) link.length = f.length_km * 1e3;
  if (given("--lambda-nm")) link.lambda = f.lambda_nm * 1e-9;
}

struct RunFlags {
  std::string receiver = "lms";
  double mu = 1.0;
  Eigen::Index symbols = kMaxSymbolsPerTrial;
  int trials = 1;
  std::uint64_t seed = 1;
  int q = 2;
  Eigen::Index training = 64;
  double awgn = 0.0;
  unsigned workers = 1;
  std::string out;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--receiver", f.receiver, "lms or differential");
  app->add_option("--mu", f.mu, "NLMS step size in (0, 2)");
  app->add_option("--symbols", f.symbols, "Counted symbols per trial (1000..100000)");
  app->add_option("--trials", f.trials, "Independent trials")->check(CLI::PositiveNumber);
  app->add_option("--seed", f.seed, "Base RNG seed");
  app->add_option("--q", f.q, "Samples per symbol")->check(CLI::PositiveNumber);
  app->add_option("--training", f.training, "Known preamble length for LMS")->check(CLI::NonNegativeNumber);
  app->add_option("--awgn", f.awgn, "AWGN variance per dimension")->check(CLI::NonNegativeNumber);
  app->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--out", f.out, "CSV output path");
}

void apply_run_flags(const CLI::App* app, const RunFlags& f, ExperimentConfig& cfg, bool only_given) {
  auto given = [&](const char* name) { return !only_given || app->count(name) > 0; };
  if (given("--receiver")) cfg.receiver.kind = parse_receiver(f.receiver);
  if (given("--mu")) cfg.receiver.mu = f.mu;
  if (given("--symbols")) cfg.symbols_per_trial = f.symbols;
  if (given("--trials")) cfg.trials = f.trials;
  if (given("--seed")) cfg.base_seed = f.seed;
  if (given("--q")) cfg.q = f.q;
  if (given("--training")) cfg.training_len = f.training;
  if (given("--awgn")) cfg.awgn_variance = f.awgn;
}

std::string timestamp() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                  std::chrono::system_clock::now())));
}

void write_manifest(const std::filesystem::path& csv, RunManifest manifest, const std::string& command) {
  manifest.entries.insert(manifest.entries.begin(), {{"tool", "oclink"},
                                                     {"version", kVersion},
                                                     {"command", command},
                                                     {"timestamp", timestamp()},
                                                     {"output", csv.string()}});
  write_file_atomic(RunManifest::path_for(csv), manifest.to_text());
}

void print_prediction(const LinkParams& link) {
  const double intrinsic = intrinsic_variance(link);
  const double eepn = eepn_variance(link);
  const FloorPrediction floor = ber_floor_with_eepn(link);
  fmt::print("n={}\n", link.order.points());
  fmt::print("sigma_sq_intrinsic={}\n", format_number(intrinsic));
  fmt::print("sigma_sq_eepn={}\n", format_number(eepn));
  fmt::print("sigma_sq_total={}\n", format_number(floor.sigma_sq));
  fmt::print("ser_floor={}\n", format_number(floor.ser));
  fmt::print("log10_ser_floor={}\n", format_number(floor.log10_ser));
  fmt::print("ber_floor={}\n", format_number(floor.ber_floor));
  fmt::print("log10_ber_floor={}\n", format_number(floor.log10_ber_floor));
  if (floor.clamped) fmt::print("note=probability below {} reported as 0\n", kProbabilityFloor);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      grid.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad grid value '" + item + "'");
    }
  }
  if (grid.empty()) throw ConfigError("empty grid");
  return grid;
}

/// Inserts config-file entries as flags right after the subcommand, skipping
/// any key already present on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
  }
  if (config.empty() || args.size() < 2) return args;

  auto present = [&](const std::string& flag) {
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  std::vector<std::string> injected;
  for (const auto& [key, value] : parse_config_file(config)) {
    const std::string flag = "--" + key;
    if (present(flag)) continue;
    if (key == "no-simulate") {
      if (value == "1" || value == "true") injected.push_back(flag);
      continue;
    }
    injected.push_back(flag);
    injected.push_back(value);
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

int run(int argc, char** argv) {
  CLI::App app{"Closed-form and Monte Carlo BER floors for one-tap NLMS carrier phase recovery"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string config_path;

  LinkFlags predict_link;
  auto* predict = app.add_subcommand("predict", "Print phase-noise variances and BER floors");
  add_link_flags(predict, predict_link);
  predict->add_option("--config", config_path, "key=value defaults file");

  LinkFlags sim_link;
  RunFlags sim_run;
  auto* simulate = app.add_subcommand("simulate", "Run one Monte Carlo experiment");
  add_link_flags(simulate, sim_link);
  add_run_flags(simulate, sim_run);
  simulate->add_option("--config", config_path, "key=value defaults file");

  LinkFlags sweep_link;
  RunFlags sweep_run;
  int figure = 0;
  std::string axis_name;
  std::string grid_text;
  std::vector<int> orders;
  double threshold = kMeasurabilityThreshold;
  bool no_simulate = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate floors along a parameter axis");
  add_link_flags(sweep_cmd, sweep_link);
  add_run_flags(sweep_cmd, sweep_run);
  sweep_cmd->add_option("--config", config_path, "key=value defaults file");
  sweep_cmd->add_option("--figure", figure, "Preset: 1 variance, 2 linewidth, 3 distance");
  sweep_cmd->add_option("--axis", axis_name, "Custom axis: sigma_sq, linewidth or distance");
  sweep_cmd->add_option("--grid", grid_text, "Comma-separated axis values (distance in km)");
  sweep_cmd->add_option("--orders", orders, "Constellation sizes")->delimiter(',');
  sweep_cmd->add_option("--threshold", threshold, "Smallest analytic floor that gets simulated");
  sweep_cmd->add_flag("--no-simulate", no_simulate, "Analytic columns only");

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = merge_config(std::move(args));
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), const_cast<char**>(cargs.data()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  std::string command;
  for (std::size_t i = 1; i < args.size(); ++i) command += (i > 1 ? " " : "") + args[i];

  try {
    if (*predict) {
      LinkParams link;
      apply_link_flags(predict, predict_link, link, false);
      link.validate();
      print_prediction(link);
      return 0;
    }

    if (*simulate) {
      ExperimentConfig cfg;
      apply_link_flags(simulate, sim_link, cfg.link, false);
      apply_run_flags(simulate, sim_run, cfg, false);
      cfg.validate();
      const BerEstimate est = run_experiment(cfg, sim_run.workers);
      fmt::print("receiver={} n={} symbols={} trials={}\n", to_string(cfg.receiver.kind),
                 cfg.link.order.points(), est.counts.symbols_counted, cfg.trials);
      fmt::print("analytic_ber_floor={}\n", format_number(ber_floor_with_eepn(cfg.link).ber_floor));
      fmt::print("ser={} [{}, {}]\n", format_number(est.ser), format_number(est.ser_ci95_lo),
                 format_number(est.ser_ci95_hi));
      fmt::print("ber={} [{}, {}]\n", format_number(est.ber), format_number(est.ci95_lo),
                 format_number(est.ci95_hi));
      if (!sim_run.out.empty()) {
        const std::filesystem::path out = sim_run.out;
        std::string content;
        if (std::filesystem::exists(out)) {
          std::ifstream in(out, std::ios::binary);
          content.assign(std::istreambuf_iterator<char>(in), {});
        } else {
          content = std::string(kSimulateHeader) + "\n";
        }
        content += simulate_csv_row(cfg, est);
        write_file_atomic(out, content);
        RunManifest manifest;
        describe(cfg, manifest);
        write_manifest(out, manifest, command);
      }
      return 0;
    }

    // sweep
    FigurePreset preset;
    if (figure != 0) {
      preset = figure_preset(figure);
    } else {
      if (axis_name.empty() || grid_text.empty())
        throw ConfigError("sweep needs --figure or both --axis and --grid");
      preset.axis = parse_axis(axis_name);
    }
    if (!axis_name.empty()) preset.axis = parse_axis(axis_name);
    if (!grid_text.empty()) preset.grid = parse_grid(grid_text);
    if (!orders.empty()) preset.orders = orders;
    for (int n : preset.orders) (void)ModOrder(n);
    apply_link_flags(sweep_cmd, sweep_link, preset.tmpl.link, true);
    apply_run_flags(sweep_cmd, sweep_run, preset.tmpl, true);
    preset.tmpl.validate();

    SweepOptions opts;
    opts.threshold = threshold;
    opts.simulate = !no_simulate;
    opts.workers = sweep_run.workers;
    const auto rows = oclink::sweep(preset.tmpl, preset.axis, preset.grid, preset.orders, opts);
    const std::string csv = sweep_csv(rows);

    if (sweep_run.out.empty()) {
      fmt::print("{}", csv);
    } else {
      write_file_atomic(sweep_run.out, csv);
      RunManifest manifest;
      manifest.add("figure", std::to_string(figure));
      manifest.add("axis", to_string(preset.axis));
      manifest.add("threshold", format_number(threshold));
      manifest.add("simulate", opts.simulate ? "1" : "0");
      describe(preset.tmpl, manifest);
      write_manifest(sweep_run.out, manifest, command);
    }
    return 0;
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const DomainError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
