#include "rdt/flow/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace rdt::flow {

double norm_h(int n, double ha, double hb) { return std::sqrt(ha * ha + (n - 1) * hb * hb); }

std::vector<double> snapshot_times(const FlowConfig& c, double t0, double duration) {
  require(duration > 0, "duration must be positive");
  const double t1 = t0 + duration;
  std::vector<double> out;
  const double step = std::pow(10.0, 1.0 / c.snapshots_per_decade);
  for (int k = 0;; ++k) {
    const double t = c.t_first * std::pow(step, k);
    if (t >= t1 * (1 - 1e-12)) break;
    if (t > t0 * (1 + 1e-12)) out.push_back(t);
  }
  out.push_back(t1);
  return out;
}

double run_dt(const FlowConfig& c, const RadialFlowState& s) { return max_stable_dt(s, c.cfl) * 2.0 / c.n; }

DiagnosticsRow diagnose(const FlowConfig& c, const RadialFlowState& s, const RadialRhs& m) {
  DiagnosticsRow d;
  d.t = s.time;
  const grid::RadialGrid& g = *s.grid;
  const int half = g.index_at_or_above(0.5 * g.r_max());
  double lo = 1, hi = 1;
  for (int i = 0; i < s.size(); ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double r = g.r(i), rho = grid::rho(r);
    const double h = norm_h(c.n, s.a[u] - 1, s.b[u] - 1);
    const double mm = norm_h(c.n, m.da[u], m.db[u]);
    d.sup_h = std::max(d.sup_h, h);
    d.weighted_h = std::max(d.weighted_h, std::pow(rho, c.ell) * h);
    d.sup_m = std::max(d.sup_m, mm);
    if (r * r <= s.time) d.ball_m = std::max(d.ball_m, std::pow(rho, c.ell_prime) * mm);
    lo = std::min({lo, s.a[u], s.b[u]});
    hi = std::max({hi, s.a[u], s.b[u]});
  }
  const auto uh = static_cast<std::size_t>(half);
  d.boundary_ratio = d.sup_h > 0 ? norm_h(c.n, s.a[uh] - 1, s.b[uh] - 1) / d.sup_h : 0.0;
  d.lambda = std::sqrt(std::max(hi, 1 / lo));
  return d;
}

Trajectory run_from(const FlowConfig& c, const RadialFlowState& initial, double duration) {
  c.validate();
  initial.validate();
  const Model model = c.flow_model();
  Trajectory tr;
  tr.config = c;
  auto record = [&](const RadialFlowState& s) {
    tr.times.push_back(s.time);
    tr.states.push_back(s);
    tr.rates.push_back(reduced_rhs(s, model));
    tr.diagnostics.push_back(diagnose(c, s, tr.rates.back()));
    tr.diagnostics.back().steps = tr.steps;
  };
  record(initial);
  RadialFlowState s = initial;
  try {
    for (double target : snapshot_times(c, initial.time, duration)) {
      while (s.time < target) {
        const double dt = std::min(run_dt(c, s), target - s.time);
        s = step(s, dt, c.cfl, model);
        if (target - s.time < 1e-12 * target) s.time = target;
        ++tr.steps;
      }
      record(s);
    }
    tr.completed = true;
  } catch (const FlowBreakdown& e) {
    tr.breakdown = e.what();
  }
  return tr;
}

Trajectory run(const FlowConfig& c) { return run_from(c, initial_state(c, make_grid(c)), c.T); }

std::vector<io::Column> trajectory_columns(const Trajectory& tr) {
  std::vector<io::Column> cols{{"t", {}}, {"r", {}}, {"a", {}}, {"b", {}}, {"m", {}}};
  const int n = tr.config.n;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const RadialFlowState& s = tr.states[k];
    for (int i = 0; i < s.size(); ++i) {
      const auto u = static_cast<std::size_t>(i);
      cols[0].values.push_back(tr.times[k]);
      cols[1].values.push_back(s.grid->r(i));
      cols[2].values.push_back(s.a[u]);
      cols[3].values.push_back(s.b[u]);
      cols[4].values.push_back(norm_h(n, tr.rates[k].da[u], tr.rates[k].db[u]));
    }
  }
  return cols;
}

std::vector<io::Column> diagnostics_columns(const Trajectory& tr) {
  std::vector<io::Column> cols{{"t", {}},      {"sup_h", {}},          {"weighted_h", {}}, {"sup_m", {}},
                               {"ball_m", {}}, {"boundary_ratio", {}}, {"lambda", {}},     {"steps", {}}};
  for (const DiagnosticsRow& d : tr.diagnostics) {
    const double v[] = {d.t, d.sup_h, d.weighted_h, d.sup_m, d.ball_m, d.boundary_ratio, d.lambda,
                        static_cast<double>(d.steps)};
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i].values.push_back(v[i]);
  }
  return cols;
}

}  // namespace rdt::flow
