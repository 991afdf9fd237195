#include "rdt/heat/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdt/common.hpp"
#include "rdt/heat/kernel.hpp"
#include "rdt/heat/shell_integrals.hpp"

namespace rdt::heat {

void RadialHistory::validate() const {
  require(grid != nullptr, "history needs a grid");
  require(n == grid->dim(), "history dimension differs from its grid");
  require(grid->gamma_order() == 1, "the Duhamel check uses the flat kernel of ℝⁿ");
  require(times.size() >= 2 && times.size() == h.size(), "history needs at least two snapshots");
  require(times.front() == 0, "history must start at t = 0");
  for (std::size_t k = 1; k < times.size(); ++k) require(times[k] > times[k - 1], "snapshot times must increase");
  for (const auto& v : h) require(v.size() == static_cast<std::size_t>(grid->size()), "profile size differs from the grid");
  require(lambda >= 1 && rm0 >= 0, "λ must be at least 1 and |Rm| nonnegative");
}

double RadialHistory::density() const {
  if (times.size() < 3) return 0;
  const double decades = std::log10(times.back() / times[1]);
  return decades > 0 ? static_cast<double>(times.size() - 2) / decades : std::numeric_limits<double>::infinity();
}

RadialHistory history_from_trajectory(const flow::Trajectory& tr) {
  require(tr.size() >= 2, "trajectory has fewer than two snapshots");
  RadialHistory out;
  out.n = tr.config.n;
  out.grid = tr.states.front().grid;
  out.times = tr.times;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const auto& s = tr.states[k];
    std::vector<double> v(s.a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = flow::norm_h(out.n, s.a[i] - 1, s.b[i] - 1);
    out.h.push_back(std::move(v));
    out.lambda = std::max(out.lambda, tr.diagnostics[k].lambda);
  }
  return out;
}

RadialHistory embedded_heat_history(std::shared_ptr<const grid::RadialGrid> grid, double amplitude, double width,
                                    std::vector<double> times) {
  require(grid != nullptr && width > 0 && std::abs(amplitude) < 1, "bad embedded heat solution");
  RadialHistory out;
  out.n = grid->dim();
  out.grid = grid;
  out.times = std::move(times);
  const double w2 = width * width;
  for (double t : out.times) {
    std::vector<double> v;
    for (double r : grid->nodes()) {
      const double u = amplitude * std::pow(1 + 4 * t / w2, -0.5 * out.n) * std::exp(-r * r / (w2 + 4 * t));
      v.push_back(std::sqrt(double(out.n)) * std::abs(u));
      out.lambda = std::max(out.lambda, std::sqrt(std::max(1 + u, 1 / (1 + u))));
    }
    out.h.push_back(std::move(v));
  }
  return out;
}

nlohmann::json DuhamelConstants::to_json() const { return {{"C", C}, {"c", c}}; }

DuhamelConstants duhamel_constants(double q, double lambda) {
  require(q > 1 && lambda >= 1, "need q > 1 and λ ≥ 1");
  DuhamelConstants k;
  k.C = std::max(2 * q * std::pow(lambda, 4), std::pow(lambda, 2));
  k.c = 3 * (q - 1) / (q * k.C);
  return k;
}

bool DuhamelReport::passed(double floor) const {
  for (const auto& s : samples)
    if (s.residual < -(s.tolerance + floor)) return false;
  return !samples.empty();
}

nlohmann::json DuhamelReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : samples)
    rows.push_back({{"t", s.t},
                    {"r", s.r},
                    {"lhs", s.lhs},
                    {"initial", s.initial},
                    {"source", s.source},
                    {"residual", s.residual},
                    {"tolerance", s.tolerance},
                    {"relative", s.relative}});
  return {{"q", q},
          {"constants", constants.to_json()},
          {"min_residual", min_residual},
          {"min_relative", min_relative},
          {"max_tolerance", max_tolerance},
          {"snapshot_times", snapshot_times},
          {"snapshot_min_residual", snapshot_min_residual},
          {"samples", rows}};
}

namespace {

// Absolute quadrature floor relative to the supremum of each integrand.
constexpr double kFloor = 1e-12;

// ∫ ψ(s)/√(t − s) ds for ψ piecewise linear through (s_j, ψ_j), s_last = t.
double product_trapezoid(const std::vector<double>& s, const std::vector<double>& psi) {
  const double t = s.back();
  double sum = 0;
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    const double u0 = t - s[j], u1 = t - s[j + 1];
    const double beta = (psi[j] - psi[j + 1]) / (u0 - u1);
    const double alpha = psi[j] - beta * u0;
    sum += 2 * alpha * (std::sqrt(u0) - std::sqrt(u1)) + (2.0 / 3.0) * beta * (u0 * std::sqrt(u0) - u1 * std::sqrt(u1));
  }
  return sum;
}

std::vector<std::size_t> evaluation_indices(const std::vector<double>& times, int count) {
  const std::size_t last = times.size() - 1;
  std::vector<std::size_t> idx;
  const double lo = std::log(times[1]), hi = std::log(times[last]);
  for (int i = 0; i < count; ++i) {
    const double target = count == 1 ? hi : lo + (hi - lo) * i / (count - 1);
    std::size_t best = 1;
    for (std::size_t k = 1; k <= last; ++k)
      if (std::abs(std::log(times[k]) - target) < std::abs(std::log(times[best]) - target)) best = k;
    idx.push_back(best);
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

}  // namespace

DuhamelReport duhamel_residual(const RadialHistory& hist, double q, const DuhamelOptions& o) {
  hist.validate();
  require(q > 1, "Duhamel check needs q > 1");
  require(o.max_times >= 1 && o.radii >= 1 && o.r_cap_fraction > 0, "bad Duhamel options");
  require(hist.density() >= o.min_density - 1e-9, "insufficient snapshot density for the time quadrature");
  const int n = hist.n;
  const double lam = hist.lambda;
  double sup_h = 0;
  for (const auto& v : hist.h) sup_h = std::max(sup_h, *std::max_element(v.begin(), v.end()));
  const double h_cap =
      std::min(2 * (q - 1) / (9 * std::pow(lam, 8)), (q - 1) / (2 * lam * lam * std::sqrt(double(n))));
  require(sup_h <= h_cap, "|h| too large for the |h|^q evolution inequality");

  DuhamelReport rep;
  rep.q = q;
  rep.constants = duhamel_constants(q, lam);
  const double C = rep.constants.C, c = rep.constants.c;
  const auto& g = *hist.grid;
  const double r_max = g.r_max();

  // P = |h|^{q/2} and its radial derivative.
  std::vector<grid::ProfileInterpolant> P;
  for (const auto& v : hist.h) {
    std::vector<double> p(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = std::pow(v[i], 0.5 * q);
    P.emplace_back(g, p);
  }
  const double e1 = (q + 2) / q;
  auto F1 = [&](std::size_t j) {
    return [&, j](double r) { return r >= r_max ? 0.0 : std::pow(std::max(0.0, P[j](r)), e1) * std::abs(P[j].derivative(r)); };
  };
  auto F2 = [&](std::size_t j) {
    return [&, j](double r) {
      if (r >= r_max) return 0.0;
      const double d = P[j].derivative(r);
      return d * d;
    };
  };
  auto E = [&](std::size_t j) {
    return [&, j](double r) {
      if (r >= r_max) return 0.0;
      const double p = P[j](r);
      return p * p;
    };
  };
  // E|y − x|/√τ under the heat kernel.
  const double mean_dist = 2 * std::tgamma(0.5 * (n + 1)) / std::tgamma(0.5 * n);
  // Node suprema set the absolute quadrature floors.
  auto node_sup = [&](auto make, std::size_t j) {
    const auto fn = make(j);
    double m = 0;
    for (double r : g.nodes()) m = std::max(m, std::abs(fn(std::min(r, 0.999999 * r_max))));
    return m;
  };
  auto options = [](double sup) {
    ShellOptions so;
    so.rel_tol = 1e-6;
    so.abs_tol = kFloor * sup;
    so.max_depth = 4;
    return so;
  };
  std::vector<double> sup1, sup2, sup0;
  for (std::size_t j = 0; j < P.size(); ++j) {
    sup1.push_back(node_sup(F1, j));
    sup2.push_back(node_sup(F2, j));
    sup0.push_back(node_sup(E, j));
  }

  rep.min_residual = rep.min_relative = std::numeric_limits<double>::infinity();
  for (std::size_t k : evaluation_indices(hist.times, o.max_times)) {
    const double t = hist.times[k];
    double snap_min = std::numeric_limits<double>::infinity();
    const double factors[] = {0, 1, 3, 10};
    for (int m = 0; m < std::min(o.radii, 4); ++m) {
      const double x = factors[m] * std::sqrt(t);
      if (x > o.r_cap_fraction * r_max) continue;
      DuhamelSample smp;
      smp.t = t;
      smp.r = x;
      smp.lhs = E(k)(x);

      ShellIntegrand f;
      f.g_width = std::sqrt(t);
      f.g_reach = gaussian_reach(t);
      f.g = [&](double s) { return gaussian(n, s, t); };
      f.w = E(0);
      smp.initial = exterior_integral(n, x, 0, f, options(sup0[0]));

      std::vector<double> s_nodes, psi;
      for (std::size_t j = 0; j < k; ++j) {
        const double tau = t - hist.times[j], st = std::sqrt(tau);
        ShellIntegrand a;
        a.g_width = st;
        a.g_reach = gaussian_reach(tau, 1, 0.5);
        a.g = [&](double s) { return gaussian(n, s, tau) * (1 + s / st); };
        a.w = F1(j);
        const double A = exterior_integral(n, x, 0, a, options(sup1[j] * (1 + mean_dist)));
        a.g = [&](double s) { return gaussian(n, s, tau); };
        a.w = F2(j);
        const double B = exterior_integral(n, x, 0, a, options(sup2[j]));
        double Rm = 0;
        if (hist.rm0 > 0) {
          a.w = E(j);
          Rm = hist.rm0 * exterior_integral(n, x, 0, a, options(sup0[j]));
        }
        s_nodes.push_back(hist.times[j]);
        psi.push_back(C * (st * Rm + A - c * st * B));
      }
      s_nodes.push_back(t);
      psi.push_back(C * F1(k)(x) * (1 + mean_dist));
      smp.source = product_trapezoid(s_nodes, psi);

      // Same rule on every other stored snapshot.
      std::vector<double> s2, p2;
      for (std::size_t j = 0; j + 1 < s_nodes.size(); ++j)
        if (j % 2 == 0 || j + 2 == s_nodes.size()) {
          s2.push_back(s_nodes[j]);
          p2.push_back(psi[j]);
        }
      s2.push_back(t);
      p2.push_back(psi.back());
      // Time-quadrature estimate plus the absolute floors of the spatial integrals.
      double floor = 0;
      for (std::size_t j = 0; j < k; ++j) floor = std::max(floor, sup1[j] * (1 + mean_dist) + c * std::sqrt(t) * sup2[j]);
      floor = kFloor * (sup0[0] + 2 * C * std::sqrt(t) * floor);
      smp.tolerance = std::abs(smp.source - product_trapezoid(s2, p2)) + floor;

      smp.residual = smp.initial + smp.source - smp.lhs;
      const double scale = std::max({smp.lhs, smp.initial, std::abs(smp.source)});
      smp.relative = scale > 0 ? smp.residual / scale : 0.0;
      rep.min_residual = std::min(rep.min_residual, smp.residual);
      rep.min_relative = std::min(rep.min_relative, smp.relative);
      rep.max_tolerance = std::max(rep.max_tolerance, smp.tolerance);
      snap_min = std::min(snap_min, smp.residual);
      rep.samples.push_back(smp);
    }
    rep.snapshot_times.push_back(t);
    rep.snapshot_min_residual.push_back(snap_min);
  }
  return rep;
}

}  // namespace rdt::heat
