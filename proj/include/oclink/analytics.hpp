#ifndef OCLINK_ANALYTICS_HPP
#define OCLINK_ANALYTICS_HPP

#include <oclink/constellation.hpp>
#include <oclink/errors.hpp>
#include <oclink/noise_models.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace oclink {

/// Tail probabilities below this are reported as 0 (with a flag); log10 stays exact.
inline constexpr double kProbabilityFloor = 1e-300;

inline double gaussian_pdf(double x, double sigma_sq) {
  detail::require(sigma_sq > 0, "Gaussian variance must be > 0");
  return std::exp(-x * x / (2.0 * sigma_sq)) / std::sqrt(2.0 * std::numbers::pi * sigma_sq);
}

/// log10 erfc(x) for x >= 0, without underflow. Uses the asymptotic series
/// once erfc itself drops below the representable probability floor.
inline double log10_erfc(double x) {
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  const double direct = std::erfc(x);
  if (direct >= kProbabilityFloor || x < 1.0) return std::log10(direct);
  const double inv = 1.0 / (2.0 * x * x);
  // 1 - 1/(2x^2) + 3/(2x^2)^2 - 15/(2x^2)^3 + 105/(2x^2)^4
  const double series = 1.0 - inv * (1.0 - 3.0 * inv * (1.0 - 5.0 * inv * (1.0 - 7.0 * inv)));
  const double ln = -x * x - std::log(x * std::sqrt(std::numbers::pi)) + std::log(series);
  return ln / std::numbers::ln10;
}

namespace detail {

inline double decision_margin(double sigma_sq, ModOrder order) {
  require(std::isfinite(sigma_sq) && sigma_sq >= 0, "phase variance must be >= 0");
  if (sigma_sq == 0) return std::numeric_limits<double>::infinity();
  return std::numbers::pi / (order.points() * std::numbers::sqrt2 * std::sqrt(sigma_sq));
}

}  // namespace detail

/// Probability that a Gaussian phase increment leaves (-pi/n, pi/n):
/// erfc(pi / (n sqrt(2) sigma)).
inline double ser_floor(double sigma_sq, ModOrder order) {
  const double x = detail::decision_margin(sigma_sq, order);
  const double p = std::isinf(x) ? 0.0 : std::erfc(x);
  return p < kProbabilityFloor ? 0.0 : p;
}

inline double log10_ser_floor(double sigma_sq, ModOrder order) {
  return log10_erfc(detail::decision_margin(sigma_sq, order));
}

inline double ber_floor(double sigma_sq, ModOrder order) { return ser_floor(sigma_sq, order) / order.bits(); }

inline double log10_ber_floor(double sigma_sq, ModOrder order) {
  return log10_ser_floor(sigma_sq, order) - std::log10(static_cast<double>(order.bits()));
}

struct FloorPrediction {
  double sigma_sq = 0.0;
  double ser = 0.0;
  double ber_floor = 0.0;
  double log10_ser = 0.0;
  double log10_ber_floor = 0.0;
  bool includes_eepn = false;
  bool clamped = false;  // true when the probability fell below kProbabilityFloor
};

inline FloorPrediction predict_floor(double sigma_sq, ModOrder order, bool includes_eepn) {
  FloorPrediction out;
  out.sigma_sq = sigma_sq;
  out.ser = ser_floor(sigma_sq, order);
  out.ber_floor = out.ser / order.bits();
  out.log10_ser = log10_ser_floor(sigma_sq, order);
  out.log10_ber_floor = log10_ber_floor(sigma_sq, order);
  out.includes_eepn = includes_eepn;
  out.clamped = sigma_sq > 0 && out.ser == 0.0;
  return out;
}

/// Floor from laser phase noise only.
inline FloorPrediction ber_floor_intrinsic(const LinkParams& p) {
  return predict_floor(intrinsic_variance(p), p.order, false);
}

/// Floor from laser phase noise plus EEPN.
inline FloorPrediction ber_floor_with_eepn(const LinkParams& p) {
  return predict_floor(total_variance(p), p.order, true);
}

}  // namespace oclink

#endif  // OCLINK_ANALYTICS_HPP
