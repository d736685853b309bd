#include <doctest.h>

#include <oclink/montecarlo.hpp>

#include <numbers>

using namespace oclink;

namespace {

/// Phase-noise-only link whose intrinsic variance is exactly `sigma_sq`.
ExperimentConfig phase_noise_only(int n, double sigma_sq, Eigen::Index symbols, int trials,
                                  ReceiverKind kind = ReceiverKind::OneTapLms) {
  ExperimentConfig cfg;
  cfg.link = apply_axis(LinkParams{}, SweepAxis::SigmaSq, sigma_sq);
  cfg.link.order = ModOrder(n);
  cfg.receiver.kind = kind;
  cfg.q = 1;
  cfg.symbols_per_trial = symbols;
  cfg.trials = trials;
  cfg.base_seed = 1234;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.symbols_per_trial = 999;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.symbols_per_trial = 100001;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.receiver.mu = 2.0;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = {};
  cfg.link.length = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(parse_receiver("viterbi"), ConfigError);
  CHECK(parse_receiver("differential") == ReceiverKind::Differential);
}

TEST_CASE("wilson interval") {
  const auto zero = wilson_interval(0, 1000);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi == doctest::Approx(3.83e-3).epsilon(0.01));
  const auto half = wilson_interval(50, 100);
  CHECK(half.lo == doctest::Approx(0.40383).epsilon(1e-4));
  CHECK(half.hi == doctest::Approx(0.59617).epsilon(1e-4));
  const auto all = wilson_interval(20, 20);
  CHECK(all.hi == 1.0);
  CHECK(all.contains(1.0));
}

TEST_CASE("noise-free experiments are error free") {
  ExperimentConfig cfg;
  cfg.link.order = ModOrder(16);
  cfg.link.disp = dispersion_si(16);
  cfg.link.length = 800e3;
  cfg.symbols_per_trial = 5000;
  for (auto kind : {ReceiverKind::OneTapLms, ReceiverKind::Differential}) {
    cfg.receiver.kind = kind;
    const auto est = run_experiment(cfg);
    CHECK(est.ber == 0.0);
    CHECK(est.ser == 0.0);
    CHECK(est.counts.symbols_counted == 5000);
    CHECK(est.counts.bits_counted == 20000);
  }
  CHECK(measure_phase_error_variance(cfg) < 1e-12);
}

TEST_CASE("experiments are deterministic and independent of worker count") {
  auto cfg = phase_noise_only(8, 0.02, 5000, 6);
  const auto a = run_experiment(cfg, 1);
  const auto b = run_experiment(cfg, 1);
  const auto c = run_experiment(cfg, 4);
  CHECK(a.counts == b.counts);
  CHECK(a.counts == c.counts);
  CHECK(a.ber == c.ber);
  CHECK(a.counts.symbol_errors > 0);

  cfg.base_seed += 1;
  CHECK(!(run_experiment(cfg).counts == a.counts));
}

TEST_CASE("counts exclude the training preamble") {
  auto cfg = phase_noise_only(4, 0.01, 2000, 1);
  cfg.training_len = 300;
  const auto est = run_experiment(cfg);
  CHECK(est.counts.symbols_counted == 2000);
  CHECK(simulate_trial(cfg, 0).transmitted.size() == 2300);
}

TEST_CASE("measured floor tracks the closed form") {
  // n=16, sigma^2 = 0.01: ber floor 1.2397e-2
  auto cfg = phase_noise_only(16, 0.01, 100000, 2);
  const auto est = run_experiment(cfg);
  const double floor = ber_floor(0.01, ModOrder(16));
  CHECK(est.ber / floor > 0.8);
  CHECK(est.ber / floor < 1.25);
  CHECK(est.ser_interval().contains(ser_floor(0.01, ModOrder(16))));

  cfg.receiver.kind = ReceiverKind::Differential;
  const auto diff = run_experiment(cfg);
  CHECK(diff.ser_interval().overlaps(est.ser_interval()));
  CHECK(diff.ber_interval().overlaps(est.ber_interval()));
}

TEST_CASE("Wilson coverage over repeated small experiments") {
  // differential detection errors are independent per symbol, so the SER
  // interval should cover erfc(pi / (n sqrt 2 sigma)) about 95 % of the time
  const double s2 = 0.02;
  const ModOrder order(8);
  const double truth = ser_floor(s2, order);
  int covered = 0;
  for (int i = 0; i < 100; ++i) {
    auto cfg = phase_noise_only(8, s2, 2000, 1, ReceiverKind::Differential);
    cfg.base_seed = 5000 + i;
    if (run_experiment(cfg).ser_interval().contains(truth)) ++covered;
  }
  CHECK(covered >= 90);
}

TEST_CASE("phase error variance without fiber is the intrinsic variance") {
  ExperimentConfig cfg;
  cfg.link.lw_tx = 1e6;
  cfg.link.lw_lo = 1e6;
  cfg.q = 2;
  cfg.symbols_per_trial = 100000;
  cfg.trials = 2;
  const double v = measure_phase_error_variance(cfg);
  const double want = intrinsic_variance(cfg.link);
  // chi-square 99 % band for 2e5 increments is about +-0.6 %
  CHECK(v == doctest::Approx(want).epsilon(0.008));
}

TEST_CASE("EEPN grows with distance in the waveform chain") {
  ExperimentConfig cfg;
  cfg.link.lw_lo = 2e6;
  cfg.link.disp = dispersion_si(16);
  cfg.symbols_per_trial = 50000;
  double previous = 0.0;
  for (double km : {0.0, 250.0, 500.0, 1000.0}) {
    cfg.link.length = km * 1e3;
    const double v = measure_phase_error_variance(cfg);
    CHECK(v > previous);
    previous = v;
  }
}

TEST_CASE("sweep marks cells below the threshold as analytic only") {
  ExperimentConfig tmpl;
  tmpl.q = 1;
  tmpl.symbols_per_trial = 2000;
  const std::vector<double> grid{1e-3, 1e-2, 4e-2};
  const std::vector<int> orders{4, 16};
  const auto rows = sweep(tmpl, SweepAxis::SigmaSq, grid, orders);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].axis_value == grid[i / 2]);
    CHECK(rows[i].n == orders[i % 2]);
    CHECK(rows[i].sigma_sq_total == doctest::Approx(grid[i / 2]).epsilon(1e-12));
    CHECK(rows[i].measured.has_value() == (rows[i].analytic.ber_floor >= kMeasurabilityThreshold));
  }
  CHECK(!rows[0].measured);
  CHECK(rows[3].measured);

  CHECK_THROWS_AS(sweep(tmpl, SweepAxis::SigmaSq, std::vector<double>{}, orders), ConfigError);
  CHECK_THROWS_AS(parse_axis("time"), ConfigError);
}

TEST_CASE("axis mapping") {
  LinkParams base;
  base.lw_tx = 9e6;
  base.length = 7e5;
  const auto v = apply_axis(base, SweepAxis::SigmaSq, 0.05);
  CHECK(intrinsic_variance(v) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(v.length == 0.0);
  const auto lw = apply_axis(base, SweepAxis::Linewidth, 1e5);
  CHECK(lw.lw_tx == 1e5);
  CHECK(lw.lw_lo == 1e5);
  const auto d = apply_axis(base, SweepAxis::Distance, 250);
  CHECK(d.length == 250e3);
  CHECK(d.lw_tx == 9e6);
  CHECK_THROWS_AS(apply_axis(base, SweepAxis::Distance, -1), ConfigError);
}
