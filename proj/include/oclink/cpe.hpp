#ifndef OCLINK_CPE_HPP
#define OCLINK_CPE_HPP

#include <oclink/constellation.hpp>
#include <oclink/errors.hpp>

#include <cmath>
#include <complex>

namespace oclink {

/// Single complex tap of the normalized LMS phase tracker.
template <typename Scalar = double>
struct LmsState {
  std::complex<Scalar> w{1, 0};
  Scalar mu{1};

  void validate() const {
    detail::require(mu > 0 && mu < 2, "LMS step size must lie in (0, 2)");
    detail::require(std::isfinite(w.real()) && std::isfinite(w.imag()), "LMS tap must be finite");
  }
};

template <typename Scalar>
struct LmsStep {
  std::complex<Scalar> y;  // equalizer output w x
  std::complex<Scalar> e;  // error d - y
  LmsState<Scalar> next;
};

/// One update: y = w x, e = d - y, w' = w + (mu / |x|^2) e conj(x).
template <typename Scalar>
LmsStep<Scalar> lms_step(const LmsState<Scalar>& state, const std::complex<Scalar>& x,
                         const std::complex<Scalar>& d) {
  const Scalar power = std::norm(x);
  if (!(power > 0) || !std::isfinite(power))
    throw DegenerateInput("normalized LMS update needs a non-zero finite input");
  LmsStep<Scalar> step;
  step.y = state.w * x;
  step.e = d - step.y;
  step.next = state;
  step.next.w += (state.mu / power) * step.e * std::conj(x);
  return step;
}

template <typename Scalar = double>
struct CpeOutput {
  SymbolVector decided;
  ComplexVector<Scalar> equalized;                 // y(k)
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tap_phase;  // arg w(k), the estimated carrier phase (negated)
  Eigen::Index skipped = 0;                         // zero-input symbols left without update
};

/// Decision-directed one-tap NLMS carrier phase recovery. The first
/// training.size() symbols use the known indices as reference d(k).
template <typename Scalar>
CpeOutput<Scalar> run_lms(const ComplexVector<Scalar>& received, ModOrder order, Scalar mu,
                          const SymbolVector& training = {},
                          std::complex<Scalar> initial_tap = {1, 0}) {
  detail::require(received.size() > 0, "no received samples");
  LmsState<Scalar> state{initial_tap, mu};
  state.validate();

  const Eigen::Index n = received.size();
  CpeOutput<Scalar> out;
  out.decided.resize(n);
  out.equalized.resize(n);
  out.tap_phase.resize(n);

  int last = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const std::complex<Scalar>& x = received[k];
    out.tap_phase[k] = std::arg(state.w);
    if (std::norm(x) == 0) {
      out.equalized[k] = {0, 0};
      out.decided[k] = last;
      ++out.skipped;
      continue;
    }
    const std::complex<Scalar> y = state.w * x;
    const int decided = slice(y, order);
    const int reference = k < training.size() ? training[k] : decided;
    const auto step = lms_step(state, x, modulate<Scalar>(reference, order));
    out.equalized[k] = step.y;
    out.decided[k] = decided;
    state = step.next;
    last = decided;
  }
  return out;
}

/// Differential detection: decided(k-1) = slice(x(k) conj(x(k-1))), k = 1..N-1.
template <typename Scalar>
SymbolVector run_differential(const ComplexVector<Scalar>& received, ModOrder order) {
  if (received.size() < 2) throw DomainError("differential detection needs at least 2 symbols");
  SymbolVector out(received.size() - 1);
  for (Eigen::Index k = 1; k < received.size(); ++k)
    out[k - 1] = slice(received[k] * std::conj(received[k - 1]), order);
  return out;
}

/// Symbol-index increments m(k) - m(k-1) mod n, k = 1..N-1.
inline SymbolVector differential_encode_increments(const SymbolVector& absolute, ModOrder order) {
  const int n = order.points();
  SymbolVector out(std::max<Eigen::Index>(absolute.size() - 1, 0));
  for (Eigen::Index k = 1; k < absolute.size(); ++k)
    out[k - 1] = ((absolute[k] - absolute[k - 1]) % n + n) % n;
  return out;
}

/// Absolute indices from a start index and a run of increments.
inline SymbolVector differential_accumulate(int start, const SymbolVector& increments, ModOrder order) {
  const int n = order.points();
  SymbolVector out(increments.size() + 1);
  out[0] = start;
  for (Eigen::Index k = 0; k < increments.size(); ++k) out[k + 1] = (out[k] + increments[k]) % n;
  return out;
}

}  // namespace oclink

#endif  // OCLINK_CPE_HPP
