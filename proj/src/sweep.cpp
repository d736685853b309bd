#include <oclink/montecarlo.hpp>

#include <numbers>

namespace oclink {

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::SigmaSq: return "sigma_sq";
    case SweepAxis::Linewidth: return "linewidth";
    case SweepAxis::Distance: return "distance";
  }
  return "?";
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "sigma_sq" || name == "sigma-sq" || name == "variance") return SweepAxis::SigmaSq;
  if (name == "linewidth") return SweepAxis::Linewidth;
  if (name == "distance" || name == "length") return SweepAxis::Distance;
  throw ConfigError("unknown sweep axis '" + name + "' (expected sigma_sq, linewidth or distance)");
}

LinkParams apply_axis(const LinkParams& base, SweepAxis axis, double value) {
  LinkParams link = base;
  switch (axis) {
    case SweepAxis::SigmaSq:
      if (!(value >= 0)) throw ConfigError("phase variance must be >= 0");
      link.lw_tx = link.lw_lo = value / (4.0 * std::numbers::pi * link.ts);
      link.length = 0.0;
      break;
    case SweepAxis::Linewidth:
      if (!(value >= 0)) throw ConfigError("linewidth must be >= 0");
      link.lw_tx = link.lw_lo = value;
      link.length = 0.0;
      break;
    case SweepAxis::Distance:
      if (!(value >= 0)) throw ConfigError("distance must be >= 0");
      link.length = value * 1e3;
      break;
  }
  return link;
}

std::vector<SweepRow> sweep(const ExperimentConfig& tmpl, SweepAxis axis, std::span<const double> grid,
                            std::span<const int> orders, const SweepOptions& opts) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  if (orders.empty()) throw ConfigError("sweep needs at least one modulation order");

  std::vector<SweepRow> rows;
  rows.reserve(grid.size() * orders.size());
  for (double value : grid) {
    for (int n : orders) {
      ExperimentConfig cfg = tmpl;
      cfg.link = apply_axis(tmpl.link, axis, value);
      cfg.link.order = ModOrder(n);

      SweepRow row;
      row.axis_value = value;
      row.n = n;
      row.sigma_sq_total = total_variance(cfg.link);
      row.analytic = ber_floor_with_eepn(cfg.link);
      if (opts.simulate && row.analytic.ber_floor >= opts.threshold) {
        cfg.base_seed = derive_seed(tmpl.base_seed, 100, rows.size());
        row.measured = run_experiment(cfg, opts.workers);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace oclink
