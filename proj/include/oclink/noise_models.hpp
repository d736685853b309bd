#ifndef OCLINK_NOISE_MODELS_HPP
#define OCLINK_NOISE_MODELS_HPP

#include <oclink/constellation.hpp>
#include <oclink/errors.hpp>
#include <oclink/sample_block.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace oclink {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// 1 ps/(nm km) = 1e-6 s/m^2.
constexpr double dispersion_si(double ps_per_nm_km) noexcept { return ps_per_nm_km * 1e-6; }
constexpr double dispersion_ps_nm_km(double s_per_m2) noexcept { return s_per_m2 * 1e6; }

/// Physical link constants, SI units throughout.
struct LinkParams {
  double lw_tx = 0.0;          // Tx 3-dB linewidth, Hz
  double lw_lo = 0.0;          // LO 3-dB linewidth, Hz
  double ts = 1.0 / 28e9;      // symbol period, s
  double disp = 0.0;           // dispersion coefficient, s/m^2 (any sign)
  double length = 0.0;         // fiber length, m
  double lambda = 1550e-9;     // carrier wavelength, m
  ModOrder order{4};

  double symbol_rate() const noexcept { return 1.0 / ts; }
  double carrier_frequency() const noexcept { return kSpeedOfLight / lambda; }

  void validate() const {
    detail::require(std::isfinite(lw_tx) && lw_tx >= 0, "Tx linewidth must be >= 0");
    detail::require(std::isfinite(lw_lo) && lw_lo >= 0, "LO linewidth must be >= 0");
    detail::require(std::isfinite(ts) && ts > 0, "symbol period must be > 0");
    detail::require(std::isfinite(disp), "dispersion must be finite");
    detail::require(std::isfinite(length) && length >= 0, "fiber length must be >= 0");
    detail::require(std::isfinite(lambda) && lambda > 0, "wavelength must be > 0");
  }
};

/// Wiener phase variance per symbol from both lasers: 2 pi (dfTx + dfLO) Ts.
inline double intrinsic_variance(const LinkParams& p) {
  p.validate();
  return 2.0 * std::numbers::pi * (p.lw_tx + p.lw_lo) * p.ts;
}

/// Equalization-enhanced phase noise variance (pi lambda^2 / 2c) |D L| dfLO / Ts.
inline double eepn_variance(const LinkParams& p) {
  p.validate();
  return std::numbers::pi * p.lambda * p.lambda / (2.0 * kSpeedOfLight) *
         std::abs(p.disp * p.length) * p.lw_lo / p.ts;
}

inline double total_variance(const LinkParams& p) { return intrinsic_variance(p) + eepn_variance(p); }

/// Mixes (base, stream, index) into an independent 64-bit seed (splitmix64 finalizer).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                    std::uint64_t index = 0) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ stream) ^ index);
}

/// Realized random-walk laser phase, one entry per sample.
template <typename Scalar = double>
struct PhaseTrajectory {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> phases;
  double increment_variance = 0.0;

  Eigen::Index size() const noexcept { return phases.size(); }
};

template <typename Scalar = double>
PhaseTrajectory<Scalar> wiener_path(Eigen::Index count, double increment_variance, std::uint64_t seed) {
  detail::require(count >= 1, "trajectory length must be >= 1");
  detail::require(std::isfinite(increment_variance) && increment_variance >= 0,
                  "increment variance must be >= 0");

  PhaseTrajectory<Scalar> traj;
  traj.increment_variance = increment_variance;
  traj.phases.setZero(count);
  if (increment_variance == 0) return traj;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> step(0.0, std::sqrt(increment_variance));
  double phase = 0.0;
  for (Eigen::Index k = 1; k < count; ++k) {
    phase += step(rng);
    traj.phases[k] = static_cast<Scalar>(phase);
  }
  return traj;
}

/// Adds independent N(0, variance) to real and imaginary parts of every sample.
template <typename Scalar>
SampleBlock<Scalar> awgn(SampleBlock<Scalar> block, double variance_per_dim, std::uint64_t seed) {
  detail::require(std::isfinite(variance_per_dim) && variance_per_dim >= 0,
                  "noise variance must be >= 0");
  if (variance_per_dim == 0) return block;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(variance_per_dim));
  for (auto& s : block.samples) {
    const double re = noise(rng);
    const double im = noise(rng);
    s += std::complex<Scalar>(static_cast<Scalar>(re), static_cast<Scalar>(im));
  }
  return block;
}

}  // namespace oclink

#endif  // OCLINK_NOISE_MODELS_HPP
