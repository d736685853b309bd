#ifndef OCLINK_MONTECARLO_HPP
#define OCLINK_MONTECARLO_HPP

#include <oclink/analytics.hpp>
#include <oclink/channel.hpp>
#include <oclink/constellation.hpp>
#include <oclink/noise_models.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace oclink {

enum class ReceiverKind { OneTapLms, Differential };

std::string to_string(ReceiverKind kind);
ReceiverKind parse_receiver(const std::string& name);

struct ReceiverSpec {
  ReceiverKind kind = ReceiverKind::OneTapLms;
  double mu = 1.0;
};

inline constexpr Eigen::Index kMinSymbolsPerTrial = 1000;
inline constexpr Eigen::Index kMaxSymbolsPerTrial = 100000;

struct ExperimentConfig {
  LinkParams link;
  ReceiverSpec receiver;
  int q = 2;
  Eigen::Index symbols_per_trial = kMaxSymbolsPerTrial;
  int trials = 1;
  double awgn_variance = 0.0;
  std::uint64_t base_seed = 1;
  Eigen::Index training_len = 64;

  /// Throws ConfigError.
  void validate() const;
};

/// Additive error counters; merging is order independent.
struct ErrorCounts {
  std::uint64_t bit_errors = 0;
  std::uint64_t symbol_errors = 0;
  std::uint64_t bits_counted = 0;
  std::uint64_t symbols_counted = 0;

  ErrorCounts& operator+=(const ErrorCounts& other) noexcept {
    bit_errors += other.bit_errors;
    symbol_errors += other.symbol_errors;
    bits_counted += other.bits_counted;
    symbols_counted += other.symbols_counted;
    return *this;
  }
  friend bool operator==(const ErrorCounts&, const ErrorCounts&) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double p) const noexcept { return lo <= p && p <= hi; }
  bool overlaps(const Interval& other) const noexcept { return lo <= other.hi && other.lo <= hi; }
};

/// Wilson score interval for a binomial proportion (z = 1.96 for 95 %).
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

struct BerEstimate {
  ErrorCounts counts;
  double ber = 0.0;
  double ser = 0.0;
  double ci95_lo = 0.0;      // BER
  double ci95_hi = 0.0;
  double ser_ci95_lo = 0.0;
  double ser_ci95_hi = 0.0;

  static BerEstimate from_counts(const ErrorCounts& counts);
  Interval ber_interval() const noexcept { return {ci95_lo, ci95_hi}; }
  Interval ser_interval() const noexcept { return {ser_ci95_lo, ser_ci95_hi}; }
};

/// Received decision-point samples and the symbols that produced them, for one trial.
struct TrialSignal {
  SymbolVector transmitted;     // absolute indices, training prefix included
  SymbolVector data;            // increments carried by transmitted[k], k >= 1 (size N-1)
  ComplexVector<double> received;
};

/// Draws data, differentially encodes it and runs the transmit chain for trial `index`.
TrialSignal simulate_trial(const ExperimentConfig& cfg, int index);

/// Error counts for one trial after the configured receiver.
ErrorCounts count_trial_errors(const ExperimentConfig& cfg, const TrialSignal& signal);

/// Runs all trials, split across `workers` threads; the result does not depend on `workers`.
BerEstimate run_experiment(const ExperimentConfig& cfg, unsigned workers = 1);

/// Derotates the decision samples by the true symbols, unwraps the residual
/// phase and returns the pooled sample variance of its per-symbol increments.
double measure_phase_error_variance(const ExperimentConfig& cfg);

enum class SweepAxis { SigmaSq, Linewidth, Distance };

std::string to_string(SweepAxis axis);
SweepAxis parse_axis(const std::string& name);

/// Applies one axis value to the template link. SigmaSq (rad^2) sets equal
/// synthetic linewidths with no fiber; Linewidth (Hz, per laser) sets both
/// lasers with no fiber; Distance sets the fiber length in km.
LinkParams apply_axis(const LinkParams& base, SweepAxis axis, double value);

inline constexpr double kMeasurabilityThreshold = 1e-5;

struct SweepRow {
  double axis_value = 0.0;
  int n = 0;
  double sigma_sq_total = 0.0;
  FloorPrediction analytic;
  std::optional<BerEstimate> measured;
};

struct SweepOptions {
  double threshold = kMeasurabilityThreshold;
  bool simulate = true;
  unsigned workers = 1;
};

/// One row per (grid point, order), grid-major then ascending n.
std::vector<SweepRow> sweep(const ExperimentConfig& tmpl, SweepAxis axis, std::span<const double> grid,
                            std::span<const int> orders, const SweepOptions& opts = {});

}  // namespace oclink

#endif  // OCLINK_MONTECARLO_HPP
