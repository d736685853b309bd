#ifndef OCLINK_REPORT_HPP
#define OCLINK_REPORT_HPP

#include <oclink/montecarlo.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace oclink {

inline constexpr const char* kVersion = "0.1.0";

/// 12 significant digits, shortest form ("%.12g").
std::string format_number(double value);

std::vector<double> linspace(double first, double last, int points);
std::vector<double> logspace(double first, double last, int points);

inline constexpr const char* kSweepHeader =
    "axis_value,n,sigma_sq_total,analytic_ber_floor,measured_ber,ci_lo,ci_hi,measured_flag,"
    "log10_analytic_ber_floor";

/// Sweep table with header; unmeasured cells leave the measured columns empty.
std::string sweep_csv(const std::vector<SweepRow>& rows);

inline constexpr const char* kSimulateHeader =
    "receiver,n,mu,q,symbols_per_trial,trials,seed,sigma_sq_total,analytic_ber_floor,ser,ber,ci_lo,ci_hi,"
    "bit_errors,symbol_errors,bits_counted,symbols_counted";

std::string simulate_csv_row(const ExperimentConfig& cfg, const BerEstimate& est);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Ordered key=value record stored next to every CSV output.
struct RunManifest {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
  std::string to_text() const;
  static std::filesystem::path path_for(const std::filesystem::path& csv) {
    return std::filesystem::path(csv.string() + ".manifest");
  }
};

/// Resolved configuration echo for manifests and console output.
void describe(const ExperimentConfig& cfg, RunManifest& manifest);

struct FigurePreset {
  int figure = 0;
  SweepAxis axis = SweepAxis::SigmaSq;
  std::vector<double> grid;
  std::vector<int> orders{4, 8, 16, 32};
  ExperimentConfig tmpl;
};

/// Parameter sweeps behind figures 1 (phase variance), 2 (laser linewidth) and
/// 3 (distance, 2 MHz lasers). Throws ConfigError for any other id.
FigurePreset figure_preset(int figure);

/// Flat key=value file; blank lines and '#' comments ignored.
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::filesystem::path& path);

}  // namespace oclink

#endif  // OCLINK_REPORT_HPP
