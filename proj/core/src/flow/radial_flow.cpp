#include "rdt/flow/radial_flow.hpp"

#include <algorithm>
#include <cmath>

namespace rdt::flow {

RadialFlowState RadialFlowState::flat(std::shared_ptr<const grid::RadialGrid> grid) {
  require(grid != nullptr, "state needs a grid");
  RadialFlowState s;
  s.a.assign(static_cast<std::size_t>(grid->size()), 1.0);
  s.b = s.a;
  s.grid = std::move(grid);
  return s;
}

void RadialFlowState::validate() const {
  require(grid != nullptr, "state needs a grid");
  require(grid->r_min() == 0.0, "flow grids start at the origin");
  require(a.size() == b.size() && static_cast<int>(a.size()) == grid->size(), "profile length does not match grid");
  require(std::isfinite(time) && time >= 0, "time must be finite and non-negative");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) throw FlowBreakdown("non-finite metric profile");
    if (!(a[i] > 0) || !(b[i] > 0)) throw FlowBreakdown("metric profile lost positivity");
  }
  require(a.front() == b.front(), "regularity at the origin needs a(0) = b(0)");
  require(a.back() == 1.0 && b.back() == 1.0, "Dirichlet condition a = b = 1 at r_max");
}

RadialRate reduced_rhs_point(int n, double r, const RadialData& d) {
  const double m = n - 1;
  if (r == 0) {
    const double v = (d.a2 + m * d.b2) / d.a;
    return {v, v};
  }
  const double a = d.a, b = d.b, a1 = d.a1, b1 = d.b1;
  const double Q = (a - b) / (r * r);
  RadialRate out;
  out.da = d.a2 / a - 1.5 * a1 * a1 / (a * a) +
           m * (a1 / (r * b) - 2 * Q / b + 2 * b1 * (b - a) / (b * b * r) + b1 * b1 / (2 * b * b));
  out.db = 2 * Q / a + m * b1 / (r * b) + d.b2 / a - b1 * b1 / (a * b);
  return out;
}

RadialRate linear_rhs_point(int n, double r, const RadialData& d) {
  const double m = n - 1;
  if (r == 0) {
    const double v = d.a2 + m * d.b2;
    return {v, v};
  }
  const double Q = (d.a - d.b) / (r * r);
  return {d.a2 + m * (d.a1 / r - 2 * Q), 2 * Q + m * d.b1 / r + d.b2};
}

std::vector<RadialData> radial_data(const RadialFlowState& s) {
  std::vector<double> a1, a2, b1, b2;
  s.grid->derivatives(s.a, a1, a2, grid::Parity::kEven);
  s.grid->derivatives(s.b, b1, b2, grid::Parity::kEven);
  std::vector<RadialData> out(s.a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {s.a[i], a1[i], a2[i], s.b[i], b1[i], b2[i]};
  return out;
}

RadialRhs reduced_rhs(const RadialFlowState& s, Model model) {
  const int n = s.grid->dim();
  const auto data = radial_data(s);
  RadialRhs out;
  out.da.assign(data.size(), 0.0);
  out.db.assign(data.size(), 0.0);
  // The last node carries the Dirichlet condition.
  for (std::size_t i = 0; i + 1 < data.size(); ++i) {
    const double r = s.grid->r(static_cast<int>(i));
    const RadialRate q = model == Model::kRicciDeTurck ? reduced_rhs_point(n, r, data[i]) : linear_rhs_point(n, r, data[i]);
    out.da[i] = q.da;
    out.db[i] = q.db;
  }
  return out;
}

tensor::SymJet cartesian_jet(int n, double r, const RadialData& d) {
  require(n >= 2 && n <= tensor::kMaxDim, "dimension out of range for Cartesian jets");
  const double E = d.a - d.b, E1 = d.a1 - d.b1, E2 = d.a2 - d.b2;
  double e_r, w, w1r, wd, b1r;  // E/r, E/r², W'r, W'r + W, B'/r
  if (r == 0) {
    require(E == 0, "regularity at the origin needs A(0) = B(0)");
    e_r = 0;
    w = 0.5 * E2;
    w1r = 0;
    wd = 0.5 * E2;
    b1r = d.b2;
  } else {
    e_r = E / r;
    w = E / (r * r);
    w1r = E1 / r - 2 * w;
    wd = E1 / r - w;
    b1r = d.b1 / r;
  }
  tensor::SymJet j;
  j.n = n;
  j.v[0][0] = d.a;
  j.d[0][0][0] = d.a1;
  j.dd[0][0][0][0] = d.a2;
  for (int i = 1; i < n; ++i) {
    j.v[i][i] = d.b;
    j.d[0][i][i] = d.b1;
    j.d[i][0][i] = j.d[i][i][0] = e_r;
    j.dd[0][0][i][i] = d.b2;
    j.dd[i][i][0][0] = b1r + w1r;
    j.dd[0][i][0][i] = j.dd[0][i][i][0] = j.dd[i][0][0][i] = j.dd[i][0][i][0] = wd;
    for (int k = 1; k < n; ++k) {
      j.dd[i][i][k][k] = b1r + (i == k ? 2 * w : 0.0);
      if (k != i) j.dd[i][k][i][k] = j.dd[i][k][k][i] = w;
    }
  }
  return j;
}

tensor::MetricFn radial_metric_fn(int n, std::function<double(double)> a, std::function<double(double)> b) {
  return [n, a = std::move(a), b = std::move(b)](const tensor::Vec& x) {
    double r2 = 0;
    for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
    const double r = std::sqrt(r2);
    const double bv = b(r);
    tensor::Mat g{};
    for (int i = 0; i < n; ++i) g[i][i] = bv;
    if (r2 > 0) {
      const double w = (a(r) - bv) / r2;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] += w * x[i] * x[j];
    }
    return g;
  };
}

double max_stable_dt(const RadialFlowState& s, double cfl) {
  require(cfl > 0, "CFL factor must be positive");
  const double lo = std::min(*std::min_element(s.a.begin(), s.a.end()), *std::min_element(s.b.begin(), s.b.end()));
  const double h = s.grid->min_spacing();
  return cfl * h * h * lo;
}

namespace {

RadialFlowState advance(const RadialFlowState& s, const RadialRhs& k, double dt) {
  RadialFlowState out = s;
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    out.a[i] += dt * k.da[i];
    out.b[i] += dt * k.db[i];
  }
  out.time = s.time + dt;
  for (std::size_t i = 0; i < out.a.size(); ++i) {
    if (!std::isfinite(out.a[i]) || !std::isfinite(out.b[i]))
      throw FlowBreakdown("non-finite metric at t = " + std::to_string(out.time));
    if (!(out.a[i] > 0) || !(out.b[i] > 0)) throw FlowBreakdown("metric lost positivity at t = " + std::to_string(out.time));
  }
  return out;
}

}  // namespace

RadialFlowState step(const RadialFlowState& s, double dt, double cfl, Model model) {
  require(dt > 0, "time step must be positive");
  require(dt <= max_stable_dt(s, cfl) * (1 + 1e-12), "time step violates the CFL bound");
  const RadialFlowState mid = advance(s, reduced_rhs(s, model), 0.5 * dt);
  RadialFlowState out = advance(s, reduced_rhs(mid, model), dt);
  out.time = s.time + dt;
  return out;
}

}  // namespace rdt::flow
