#include <doctest.h>

#include "oracles.hpp"

#include <oclink/noise_models.hpp>

#include <random>

using namespace oclink;

namespace {

LinkParams fig3_link() {
  LinkParams p;
  p.lw_tx = 2e6;
  p.lw_lo = 2e6;
  p.ts = 1.0 / 28e9;
  p.disp = dispersion_si(16.0);
  p.length = 1000e3;
  p.lambda = 1550e-9;
  return p;
}

}  // namespace

TEST_CASE("intrinsic variance") {
  LinkParams p;
  CHECK(intrinsic_variance(p) == 0.0);

  p.lw_tx = p.lw_lo = 1e6;
  const double want = oracle::intrinsic_variance("1e6", "1e6", "28e9");
  CHECK(want == doctest::Approx(4.487989505128276e-4).epsilon(1e-12));
  CHECK(intrinsic_variance(p) == doctest::Approx(want).epsilon(1e-13));

  p.lw_tx = p.lw_lo = 2e6;
  CHECK(intrinsic_variance(p) == doctest::Approx(8.975979010256552e-4).epsilon(1e-13));

  // linear in combined linewidth and in Ts; falls with symbol rate
  const double base = intrinsic_variance(p);
  LinkParams wide = p;
  wide.lw_tx *= 2;
  wide.lw_lo *= 2;
  CHECK(intrinsic_variance(wide) == doctest::Approx(2 * base).epsilon(1e-12));
  LinkParams slow = p;
  slow.ts *= 2;
  CHECK(intrinsic_variance(slow) == doctest::Approx(2 * base).epsilon(1e-12));
}

TEST_CASE("EEPN variance") {
  LinkParams p = fig3_link();
  const double want = oracle::eepn_variance("1550", "16", "1000", "2e6", "28e9");
  CHECK(want == doctest::Approx(1.127899957013517e-2).epsilon(1e-12));
  CHECK(eepn_variance(p) == doctest::Approx(want).epsilon(1e-13));

  LinkParams no_fiber = p;
  no_fiber.length = 0;
  CHECK(eepn_variance(no_fiber) == 0.0);

  LinkParams clean_lo = p;
  clean_lo.lw_lo = 0;
  CHECK(eepn_variance(clean_lo) == 0.0);

  // |D L|: a negative-dispersion link gives the same non-negative variance
  LinkParams negative = p;
  negative.disp = -p.disp;
  CHECK(eepn_variance(negative) == eepn_variance(p));

  // linear in lambda^2, |D L|, dfLO and symbol rate
  const double base = eepn_variance(p);
  LinkParams x = p;
  x.lambda *= std::sqrt(2.0);
  CHECK(eepn_variance(x) == doctest::Approx(2 * base).epsilon(1e-12));
  x = p;
  x.length *= 3;
  CHECK(eepn_variance(x) == doctest::Approx(3 * base).epsilon(1e-12));
  x = p;
  x.lw_lo *= 5;
  CHECK(eepn_variance(x) == doctest::Approx(5 * base).epsilon(1e-12));
  x = p;
  x.ts /= 2;
  CHECK(eepn_variance(x) == doctest::Approx(2 * base).epsilon(1e-12));
  // opposite symbol-rate trend to the intrinsic part
  CHECK(intrinsic_variance(x) < intrinsic_variance(p));
}

TEST_CASE("total variance is the sum of both parts") {
  const LinkParams p = fig3_link();
  CHECK(total_variance(p) == doctest::Approx(1.217659747116083e-2).epsilon(1e-12));

  LinkParams dark;
  CHECK(total_variance(dark) == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    LinkParams r;
    r.lw_tx = 1e7 * u(rng);
    r.lw_lo = 1e7 * u(rng);
    r.ts = 1.0 / (1e9 + 1e11 * u(rng));
    r.disp = dispersion_si(-20 + 40 * u(rng));
    r.length = 5e6 * u(rng);
    r.lambda = 1e-6 + 1e-6 * u(rng);
    CHECK(total_variance(r) == intrinsic_variance(r) + eepn_variance(r));
  }
}

TEST_CASE("link validation") {
  LinkParams p;
  p.length = -1;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.ts = 0;
  CHECK_THROWS_AS(intrinsic_variance(p), DomainError);
  p = {};
  p.lw_lo = -1;
  CHECK_THROWS_AS(eepn_variance(p), DomainError);
  CHECK(dispersion_si(16.0) == doctest::Approx(16e-6));
}

TEST_CASE("wiener path statistics") {
  const auto still = wiener_path(100, 0.0, 9);
  CHECK(still.phases.isZero(0.0));

  CHECK(wiener_path(1000, 0.01, 5).phases == wiener_path(1000, 0.01, 5).phases);
  CHECK_THROWS_AS(wiener_path(10, -1.0, 1), DomainError);
  CHECK_THROWS_AS(wiener_path(0, 1.0, 1), DomainError);

  const std::size_t steps = 1000000;
  const double variance = 3e-3;
  const auto traj = wiener_path(steps + 1, variance, 123);
  CHECK(traj.phases[0] == 0.0);
  std::vector<double> inc(steps);
  for (std::size_t k = 0; k < steps; ++k) inc[k] = traj.phases[k + 1] - traj.phases[k];

  const auto m = oracle::moments(inc);
  CHECK(oracle::chi_square_band(variance, steps).contains(m.variance));
  CHECK(std::abs(m.variance / variance - 1.0) < 0.01);
  CHECK(std::abs(m.skewness) < 5 * std::sqrt(6.0 / steps));
  CHECK(std::abs(m.excess_kurtosis) < 5 * std::sqrt(24.0 / steps));
}

TEST_CASE("awgn adds independent per-dimension noise") {
  SampleBlock<double> block;
  block.samples = ComplexVector<double>::Constant(1000000, {0.5, -0.25});
  block.sample_rate = 1.0;

  CHECK(awgn(block, 0.0, 1).samples == block.samples);
  CHECK_THROWS_AS(awgn(block, -0.1, 1), DomainError);

  const double variance = 0.02;
  const auto noisy = awgn(block, variance, 42);
  std::vector<double> re(block.size()), im(block.size());
  for (Eigen::Index k = 0; k < block.size(); ++k) {
    re[k] = noisy.samples[k].real() - block.samples[k].real();
    im[k] = noisy.samples[k].imag() - block.samples[k].imag();
  }
  const auto band = oracle::chi_square_band(variance, re.size());
  const auto mr = oracle::moments(re);
  const auto mi = oracle::moments(im);
  CHECK(band.contains(mr.variance));
  CHECK(band.contains(mi.variance));
  const double se = std::sqrt(variance / re.size());
  CHECK(std::abs(mr.mean) < 5 * se);
  CHECK(std::abs(mi.mean) < 5 * se);
}

TEST_CASE("derived seeds differ per stream and index") {
  CHECK(derive_seed(1, 1, 0) != derive_seed(1, 1, 1));
  CHECK(derive_seed(1, 1, 0) != derive_seed(1, 2, 0));
  CHECK(derive_seed(1, 1, 0) != derive_seed(2, 1, 0));
  CHECK(derive_seed(7, 3, 9) == derive_seed(7, 3, 9));
}
