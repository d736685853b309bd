#ifndef OCLINK_CHANNEL_HPP
#define OCLINK_CHANNEL_HPP

#include <oclink/constellation.hpp>
#include <oclink/errors.hpp>
#include <oclink/noise_models.hpp>
#include <oclink/sample_block.hpp>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace oclink {

/// Accumulated fiber dispersion. disp in s/m^2, length and lambda in m.
struct DispersionSpec {
  double disp = 0.0;
  double length = 0.0;
  double lambda = 1550e-9;

  static DispersionSpec of(const LinkParams& p) { return {p.disp, p.length, p.lambda}; }

  /// lambda^2 D L / c, in s^2: group delay per unit baseband frequency.
  double delay_slope() const noexcept { return lambda * lambda * disp * length / kSpeedOfLight; }
  bool is_null() const noexcept { return disp == 0.0 || length == 0.0; }

  void validate() const {
    detail::require(std::isfinite(lambda) && lambda > 0, "wavelength must be > 0");
    detail::require(std::isfinite(length) && length >= 0, "fiber length must be >= 0");
    detail::require(std::isfinite(disp), "dispersion must be finite");
  }
};

inline constexpr Eigen::Index kMinGuardSymbols = 512;

/// Dispersed impulse-response spread, in symbols, for a signal occupying the
/// full simulated band q/Ts.
inline double cd_memory_symbols(const DispersionSpec& spec, double ts, int q) {
  return std::abs(spec.delay_slope()) * (q / ts) / ts;
}

/// Rectangular (NRZ) shaping: each symbol held for q samples.
template <typename Scalar>
SampleBlock<Scalar> upsample(const ComplexVector<Scalar>& symbols, int q, double symbol_period) {
  detail::require(q >= 1, "oversampling factor must be >= 1");
  detail::require(symbol_period > 0, "symbol period must be > 0");
  SampleBlock<Scalar> block;
  block.samples_per_symbol = q;
  block.sample_rate = q / symbol_period;
  block.samples = symbols.transpose().replicate(q, 1).reshaped();
  return block;
}

/// Picks the sample at offset floor(q/2) of every symbol interval.
template <typename Scalar>
ComplexVector<Scalar> downsample(const SampleBlock<Scalar>& block) {
  const int q = block.samples_per_symbol;
  detail::require(q >= 1, "oversampling factor must be >= 1");
  detail::require(block.size() % q == 0, "block length must be a multiple of samples per symbol");
  const Eigen::Index count = block.size() / q;
  return block.samples(Eigen::seqN(q / 2, count, q));
}

/// Rotates sample k by exp(j phi_k).
template <typename Scalar, typename TrajScalar>
SampleBlock<Scalar> apply_phase(SampleBlock<Scalar> block, const PhaseTrajectory<TrajScalar>& traj) {
  if (traj.size() != block.size())
    throw DomainError("phase trajectory length does not match block length");
  for (Eigen::Index k = 0; k < block.size(); ++k)
    block.samples[k] *= std::polar(Scalar(1), static_cast<Scalar>(traj.phases[k]));
  return block;
}

namespace detail {

/// Multiplies the DFT of the block by exp(sign * j pi lambda^2 D L f^2 / c).
template <typename Scalar>
SampleBlock<Scalar> quadratic_phase_filter(SampleBlock<Scalar> block, const DispersionSpec& spec,
                                           double sign) {
  spec.validate();
  if (spec.is_null() || block.size() == 0) return block;

  const Eigen::Index n = block.size();
  Eigen::FFT<Scalar> fft;
  ComplexVector<Scalar> spectrum(n);
  fft.fwd(spectrum, block.samples);

  const double df = block.sample_rate / static_cast<double>(n);
  const double slope = std::numbers::pi * spec.delay_slope();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double f = (k < (n + 1) / 2 ? k : k - n) * df;
    spectrum[k] *= std::polar(Scalar(1), static_cast<Scalar>(sign * slope * f * f));
  }
  fft.inv(block.samples, spectrum);
  return block;
}

}  // namespace detail

/// Fiber chromatic dispersion: H(f) = exp(-j pi lambda^2 D L f^2 / c), circular over the block.
template <typename Scalar>
SampleBlock<Scalar> propagate_cd(SampleBlock<Scalar> block, const DispersionSpec& spec) {
  return detail::quadratic_phase_filter(std::move(block), spec, -1.0);
}

/// Electronic dispersion compensation: the conjugate filter H*(f).
template <typename Scalar>
SampleBlock<Scalar> compensate_cd(SampleBlock<Scalar> block, const DispersionSpec& spec) {
  return detail::quadratic_phase_filter(std::move(block), spec, +1.0);
}

struct TransmitOptions {
  int q = 2;
  double awgn_variance = 0.0;  // per dimension, per sample
  Eigen::Index min_guard_symbols = kMinGuardSymbols;
};

struct TransmitSeeds {
  std::uint64_t tx_phase = 1;
  std::uint64_t lo_phase = 2;
  std::uint64_t awgn = 3;
  std::uint64_t guard = 4;

  static TransmitSeeds derived_from(std::uint64_t base) {
    return {derive_seed(base, 11), derive_seed(base, 12), derive_seed(base, 13), derive_seed(base, 14)};
  }
};

/// Guard symbols needed on each side of a block for the given link.
inline Eigen::Index guard_symbols(const LinkParams& params, const TransmitOptions& opts) {
  const DispersionSpec spec = DispersionSpec::of(params);
  if (spec.is_null()) return 0;
  const double memory = cd_memory_symbols(spec, params.ts, opts.q);
  const auto needed = static_cast<Eigen::Index>(std::ceil(memory)) + 1;
  const Eigen::Index guard = std::max(opts.min_guard_symbols, needed);
  detail::require(static_cast<double>(guard) > memory, "guard shorter than dispersion memory");
  return guard;
}

/// Waveform chain from Tx symbols to receiver decision samples:
/// upsample, Tx laser phase, fiber CD, LO laser phase, (AWGN), EDC, downsample.
/// The LO rotation acting between CD and EDC is what produces EEPN.
template <typename Scalar>
ComplexVector<Scalar> transmit(const ComplexVector<Scalar>& symbols, const LinkParams& params,
                               const TransmitOptions& opts, const TransmitSeeds& seeds) {
  params.validate();
  detail::require(opts.q >= 1, "oversampling factor must be >= 1");
  detail::require(symbols.size() >= 1, "no symbols to transmit");

  const DispersionSpec spec = DispersionSpec::of(params);
  const Eigen::Index guard = guard_symbols(params, opts);
  const Eigen::Index count = symbols.size();

  ComplexVector<Scalar> framed(count + 2 * guard);
  if (guard > 0) {
    const SymbolVector filler = random_symbols(2 * guard, params.order, seeds.guard);
    framed.head(guard) = modulate<Scalar>(filler.head(guard), params.order);
    framed.tail(guard) = modulate<Scalar>(filler.tail(guard), params.order);
  }
  framed.segment(guard, count) = symbols;

  SampleBlock<Scalar> block = upsample(framed, opts.q, params.ts);
  const Eigen::Index used = block.size();
  if (!spec.is_null()) {
    const auto padded = static_cast<Eigen::Index>(std::bit_ceil(static_cast<std::uint64_t>(used)));
    block.samples.conservativeResize(padded);
    block.samples.tail(padded - used).setZero();
  }

  const double per_sample = 2.0 * std::numbers::pi * params.ts / opts.q;
  block = apply_phase(std::move(block), wiener_path<double>(block.size(), per_sample * params.lw_tx, seeds.tx_phase));
  block = propagate_cd(std::move(block), spec);
  block = apply_phase(std::move(block), wiener_path<double>(block.size(), per_sample * params.lw_lo, seeds.lo_phase));
  block = awgn(std::move(block), opts.awgn_variance, seeds.awgn);
  block = compensate_cd(std::move(block), spec);

  block.samples.conservativeResize(used);
  return downsample(block).segment(guard, count);
}

}  // namespace oclink

#endif  // OCLINK_CHANNEL_HPP
