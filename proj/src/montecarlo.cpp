#include <oclink/cpe.hpp>
#include <oclink/montecarlo.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace oclink {

std::string to_string(ReceiverKind kind) {
  return kind == ReceiverKind::OneTapLms ? "lms" : "differential";
}

ReceiverKind parse_receiver(const std::string& name) {
  if (name == "lms" || name == "one-tap-lms") return ReceiverKind::OneTapLms;
  if (name == "differential" || name == "diff") return ReceiverKind::Differential;
  throw ConfigError("unknown receiver '" + name + "' (expected lms or differential)");
}

void ExperimentConfig::validate() const {
  try {
    link.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (receiver.kind == ReceiverKind::OneTapLms && !(receiver.mu > 0 && receiver.mu < 2))
    throw ConfigError("LMS step size must lie in (0, 2)");
  if (q < 1) throw ConfigError("oversampling factor must be >= 1");
  if (symbols_per_trial < kMinSymbolsPerTrial)
    throw ConfigError("symbols per trial must be >= " + std::to_string(kMinSymbolsPerTrial));
  if (symbols_per_trial > kMaxSymbolsPerTrial)
    throw ConfigError("symbols per trial is capped at " + std::to_string(kMaxSymbolsPerTrial) +
                      "; use more trials");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!(std::isfinite(awgn_variance) && awgn_variance >= 0)) throw ConfigError("AWGN variance must be >= 0");
  if (training_len < 0) throw ConfigError("training length must be >= 0");
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  Interval out{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  // keep the point estimate inside despite rounding at p = 0 or 1
  out.lo = std::min(out.lo, p);
  out.hi = std::max(out.hi, p);
  return out;
}

BerEstimate BerEstimate::from_counts(const ErrorCounts& counts) {
  BerEstimate est;
  est.counts = counts;
  if (counts.bits_counted > 0)
    est.ber = static_cast<double>(counts.bit_errors) / static_cast<double>(counts.bits_counted);
  if (counts.symbols_counted > 0)
    est.ser = static_cast<double>(counts.symbol_errors) / static_cast<double>(counts.symbols_counted);
  const Interval b = wilson_interval(counts.bit_errors, counts.bits_counted);
  const Interval s = wilson_interval(counts.symbol_errors, counts.symbols_counted);
  est.ci95_lo = b.lo;
  est.ci95_hi = b.hi;
  est.ser_ci95_lo = s.lo;
  est.ser_ci95_hi = s.hi;
  return est;
}

namespace {

enum SeedStream : std::uint64_t { kDataStream = 1, kChannelStream = 2 };

Eigen::Index first_counted(const ExperimentConfig& cfg) { return std::max<Eigen::Index>(cfg.training_len, 1); }

}  // namespace

TrialSignal simulate_trial(const ExperimentConfig& cfg, int index) {
  const ModOrder order = cfg.link.order;
  const Eigen::Index total = first_counted(cfg) + cfg.symbols_per_trial;

  const SymbolVector raw = random_symbols(total, order, derive_seed(cfg.base_seed, kDataStream, index));
  TrialSignal signal;
  signal.data = raw.tail(total - 1);
  signal.transmitted = differential_accumulate(raw[0], signal.data, order);

  TransmitOptions opts;
  opts.q = cfg.q;
  opts.awgn_variance = cfg.awgn_variance;
  signal.received = transmit(modulate<double>(signal.transmitted, order), cfg.link, opts,
                             TransmitSeeds::derived_from(derive_seed(cfg.base_seed, kChannelStream, index)));
  return signal;
}

ErrorCounts count_trial_errors(const ExperimentConfig& cfg, const TrialSignal& signal) {
  const ModOrder order = cfg.link.order;
  const int n = order.points();
  const Eigen::Index total = signal.received.size();
  const Eigen::Index first = first_counted(cfg);

  // decoded[k] is the increment recovered for symbol k (k >= 1)
  SymbolVector decoded(total);
  if (cfg.receiver.kind == ReceiverKind::Differential) {
    decoded.tail(total - 1) = run_differential(signal.received, order);
  } else {
    const Eigen::Index train = std::min(cfg.training_len, total);
    const SymbolVector training = signal.transmitted.head(train);
    const auto out = run_lms(signal.received, order, cfg.receiver.mu, training);
    for (Eigen::Index k = 1; k < total; ++k) {
      const int previous = k - 1 < train ? signal.transmitted[k - 1] : out.decided[k - 1];
      decoded[k] = ((out.decided[k] - previous) % n + n) % n;
    }
  }

  ErrorCounts counts;
  for (Eigen::Index k = first; k < total; ++k) {
    const int truth = signal.data[k - 1];
    if (decoded[k] != truth) {
      ++counts.symbol_errors;
      counts.bit_errors += static_cast<std::uint64_t>(gray_distance(decoded[k], truth));
    }
  }
  counts.symbols_counted = static_cast<std::uint64_t>(total - first);
  counts.bits_counted = counts.symbols_counted * static_cast<std::uint64_t>(order.bits());
  return counts;
}

BerEstimate run_experiment(const ExperimentConfig& cfg, unsigned workers) {
  cfg.validate();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(cfg.trials));

  std::vector<ErrorCounts> partial(workers);
  auto work = [&](unsigned w) {
    for (int i = static_cast<int>(w); i < cfg.trials; i += static_cast<int>(workers))
      partial[w] += count_trial_errors(cfg, simulate_trial(cfg, i));
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  ErrorCounts total;
  for (const auto& p : partial) total += p;
  return BerEstimate::from_counts(total);
}

double measure_phase_error_variance(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModOrder order = cfg.link.order;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;

  for (int i = 0; i < cfg.trials; ++i) {
    const TrialSignal signal = simulate_trial(cfg, i);
    const ComplexVector<double> reference = modulate<double>(signal.transmitted, order);
    double previous = std::arg(signal.received[0] * std::conj(reference[0]));
    for (Eigen::Index k = 1; k < signal.received.size(); ++k) {
      const double residual = std::arg(signal.received[k] * std::conj(reference[k]));
      // unwrapping then differencing equals wrapping the raw difference
      const double step = std::remainder(residual - previous, 2.0 * std::numbers::pi);
      sum += step;
      sum_sq += step * step;
      ++count;
      previous = residual;
    }
  }
  if (count < 2) return 0.0;
  const double mean = sum / static_cast<double>(count);
  return std::max(0.0, (sum_sq - static_cast<double>(count) * mean * mean) / static_cast<double>(count - 1));
}

}  // namespace oclink
