#ifndef OCLINK_CONSTELLATION_HPP
#define OCLINK_CONSTELLATION_HPP

#include <oclink/errors.hpp>

#include <Eigen/Core>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oclink {

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using SymbolVector = Eigen::VectorXi;

/// Number of points of an n-PSK alphabet. Always a power of two, at least 2.
class ModOrder {
 public:
  explicit ModOrder(int points) : points_(points) {
    if (points < 2 || !std::has_single_bit(static_cast<unsigned>(points)))
      throw DomainError("modulation order must be a power of two >= 2, got " +
                        std::to_string(points));
  }

  int points() const noexcept { return points_; }
  int bits() const noexcept { return std::countr_zero(static_cast<unsigned>(points_)); }

  bool contains(int m) const noexcept { return m >= 0 && m < points_; }

  friend bool operator==(ModOrder, ModOrder) = default;

 private:
  int points_;
};

/// Unit-modulus point exp(j 2 pi m / n). Zero rotation offset.
template <typename Scalar = double>
std::complex<Scalar> modulate(int m, ModOrder order) {
  if (!order.contains(m))
    throw DomainError("symbol index " + std::to_string(m) + " outside [0, " +
                      std::to_string(order.points()) + ")");
  const Scalar angle = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(m) / Scalar(order.points());
  return std::polar(Scalar(1), angle);
}

template <typename Scalar = double>
ComplexVector<Scalar> modulate(const SymbolVector& symbols, ModOrder order) {
  ComplexVector<Scalar> out(symbols.size());
  for (Eigen::Index k = 0; k < symbols.size(); ++k) out[k] = modulate<Scalar>(symbols[k], order);
  return out;
}

/// Minimum angular distance decision. Boundaries sit at odd multiples of pi/n;
/// a sample exactly on a boundary goes to the lower of the two indices.
template <typename Scalar>
int slice(const std::complex<Scalar>& y, ModOrder order) {
  if (!(std::isfinite(y.real()) && std::isfinite(y.imag())) || (y.real() == 0 && y.imag() == 0))
    throw DegenerateInput("cannot slice a zero or non-finite sample");

  const int n = order.points();
  Scalar t = std::arg(y) * Scalar(n) / (Scalar(2) * std::numbers::pi_v<Scalar>);
  if (t < 0) t += Scalar(n);

  const Scalar below = std::floor(t);
  const Scalar frac = t - below;
  const int k = static_cast<int>(below);
  int m;
  if (frac < Scalar(0.5))
    m = k;
  else if (frac > Scalar(0.5))
    m = k + 1;
  else
    m = std::min(k % n, (k + 1) % n);
  return ((m % n) + n) % n;
}

template <typename Scalar>
SymbolVector slice(const ComplexVector<Scalar>& y, ModOrder order) {
  SymbolVector out(y.size());
  for (Eigen::Index k = 0; k < y.size(); ++k) out[k] = slice(y[k], order);
  return out;
}

/// Binary-reflected Gray label of m, as an integer.
inline std::uint32_t gray_code(std::uint32_t m) noexcept { return m ^ (m >> 1); }

inline std::uint32_t gray_index(std::uint32_t code) noexcept {
  std::uint32_t m = code;
  for (std::uint32_t shift = code >> 1; shift != 0; shift >>= 1) m ^= shift;
  return m;
}

/// Gray label as log2(n) bits, most significant first.
inline std::vector<std::uint8_t> gray_encode(int m, ModOrder order) {
  if (!order.contains(m)) throw DomainError("symbol index outside alphabet");
  const std::uint32_t code = gray_code(static_cast<std::uint32_t>(m));
  std::vector<std::uint8_t> bits(order.bits());
  for (int b = 0; b < order.bits(); ++b) bits[b] = (code >> (order.bits() - 1 - b)) & 1u;
  return bits;
}

inline int gray_decode(const std::vector<std::uint8_t>& bits, ModOrder order) {
  if (static_cast<int>(bits.size()) != order.bits())
    throw DomainError("expected " + std::to_string(order.bits()) + " bits, got " +
                      std::to_string(bits.size()));
  std::uint32_t code = 0;
  for (auto bit : bits) {
    if (bit > 1) throw DomainError("bit values must be 0 or 1");
    code = (code << 1) | bit;
  }
  return static_cast<int>(gray_index(code));
}

/// Number of label bits that differ between two symbol indices.
inline int gray_distance(int a, int b) noexcept {
  return std::popcount(gray_code(static_cast<std::uint32_t>(a)) ^
                       gray_code(static_cast<std::uint32_t>(b)));
}

/// Uniform i.i.d. symbol indices; identical output for identical seed.
inline SymbolVector random_symbols(Eigen::Index count, ModOrder order, std::uint64_t seed) {
  if (count < 1) throw DomainError("symbol count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, order.points() - 1);
  SymbolVector out(count);
  for (auto& m : out) m = pick(rng);
  return out;
}

}  // namespace oclink

#endif  // OCLINK_CONSTELLATION_HPP
