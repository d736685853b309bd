#include <oclink/report.hpp>

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace oclink {

std::string format_number(double value) { return fmt::format("{:.12g}", value); }

std::vector<double> linspace(double first, double last, int points) {
  if (points < 1) throw ConfigError("grid needs at least one point");
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i)
    out[i] = points == 1 ? first : first + (last - first) * i / (points - 1);
  return out;
}

std::vector<double> logspace(double first, double last, int points) {
  if (!(first > 0 && last > 0)) throw ConfigError("log grid bounds must be > 0");
  std::vector<double> out = linspace(std::log10(first), std::log10(last), points);
  for (auto& v : out) v = std::pow(10.0, v);
  out.front() = first;
  out.back() = last;
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const auto& row : rows) {
    out += fmt::format("{},{},{},{},", format_number(row.axis_value), row.n, format_number(row.sigma_sq_total),
                       format_number(row.analytic.ber_floor));
    if (row.measured)
      out += fmt::format("{},{},{},1,", format_number(row.measured->ber), format_number(row.measured->ci95_lo),
                         format_number(row.measured->ci95_hi));
    else
      out += ",,,0,";
    out += format_number(row.analytic.log10_ber_floor);
    out += '\n';
  }
  return out;
}

std::string simulate_csv_row(const ExperimentConfig& cfg, const BerEstimate& est) {
  const auto floor = ber_floor_with_eepn(cfg.link);
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(cfg.receiver.kind),
                     cfg.link.order.points(), format_number(cfg.receiver.mu), cfg.q, cfg.symbols_per_trial,
                     cfg.trials, cfg.base_seed, format_number(floor.sigma_sq), format_number(floor.ber_floor),
                     format_number(est.ser), format_number(est.ber), format_number(est.ci95_lo),
                     format_number(est.ci95_hi), est.counts.bit_errors, est.counts.symbol_errors,
                     est.counts.bits_counted, est.counts.symbols_counted);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string RunManifest::to_text() const {
  std::string out;
  for (const auto& [key, value] : entries) out += key + "=" + value + "\n";
  return out;
}

void describe(const ExperimentConfig& cfg, RunManifest& manifest) {
  const LinkParams& l = cfg.link;
  manifest.add("n", std::to_string(l.order.points()));
  manifest.add("lw_tx_hz", format_number(l.lw_tx));
  manifest.add("lw_lo_hz", format_number(l.lw_lo));
  manifest.add("baud", format_number(l.symbol_rate()));
  manifest.add("disp_ps_nm_km", format_number(dispersion_ps_nm_km(l.disp)));
  manifest.add("length_km", format_number(l.length / 1e3));
  manifest.add("lambda_nm", format_number(l.lambda * 1e9));
  manifest.add("receiver", to_string(cfg.receiver.kind));
  manifest.add("mu", format_number(cfg.receiver.mu));
  manifest.add("q", std::to_string(cfg.q));
  manifest.add("symbols", std::to_string(cfg.symbols_per_trial));
  manifest.add("trials", std::to_string(cfg.trials));
  manifest.add("training", std::to_string(cfg.training_len));
  manifest.add("awgn_variance", format_number(cfg.awgn_variance));
  manifest.add("seed", std::to_string(cfg.base_seed));
}

FigurePreset figure_preset(int figure) {
  FigurePreset preset;
  preset.figure = figure;
  preset.tmpl.link.ts = 1.0 / 28e9;
  preset.tmpl.link.lambda = 1550e-9;
  preset.tmpl.link.disp = dispersion_si(16.0);
  switch (figure) {
    case 1:
      preset.axis = SweepAxis::SigmaSq;
      preset.grid = logspace(1e-4, 1.0, 25);
      preset.tmpl.q = 1;
      break;
    case 2:
      preset.axis = SweepAxis::Linewidth;
      preset.grid = logspace(1e4, 1e8, 25);
      preset.tmpl.q = 1;
      break;
    case 3:
      preset.axis = SweepAxis::Distance;
      preset.grid = linspace(0.0, 5000.0, 21);
      preset.tmpl.link.lw_tx = 2e6;
      preset.tmpl.link.lw_lo = 2e6;
      preset.tmpl.q = 2;
      break;
    default:
      throw ConfigError("unknown figure id " + std::to_string(figure) + " (expected 1, 2 or 3)");
  }
  return preset;
}

std::vector<std::pair<std::string, std::string>> parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());

  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };

  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    if (key.empty()) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

}  // namespace oclink
