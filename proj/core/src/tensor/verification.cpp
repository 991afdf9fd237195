#include "rdt/tensor/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rdt/common.hpp"
#include "rdt/grid/cartesian_patch.hpp"
#include "rdt/tensor/metrics.hpp"
#include "rdt/tensor/patch_fields.hpp"
#include "rdt/tensor/pointwise.hpp"

namespace rdt::tensor {

namespace {

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = std::log(xs[i]), y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double max_entry(const Mat& a, const Mat& b, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s = std::max(s, std::abs(a[i][j] - b[i][j]));
  return s;
}

Vec random_point(std::mt19937_64& rng, int n, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  Vec x{};
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

}  // namespace

nlohmann::json OracleStudy::to_json() const {
  return {{"n", n}, {"spacings", spacings}, {"orders", orders}, {"min_order", min_order}, {"max_error", max_error}};
}

OracleStudy operator_oracle_study(int n, int metrics, std::uint64_t seed, const std::vector<double>& spacings,
                                  double c2_bound) {
  require(metrics >= 1 && spacings.size() >= 2, "need at least one metric and two spacings");
  OracleStudy out;
  out.n = n;
  out.spacings = spacings;
  out.min_order = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  for (int k = 0; k < metrics; ++k) {
    RandomMetric g(n, rng());
    g.cap_c2_norm(c2_bound, 1.0);
    const Vec center = random_point(rng, n, 0.5);
    std::vector<double> errors;
    for (double h : spacings) {
      const auto pm = PatchMetric::sample(grid::CartesianPatch(n, center, 4 * h, 9), g.fn(), euclidean_metric(n));
      errors.push_back(max_difference(ricci_deturck(pm), ricci_deturck_oracle(pm)));
    }
    out.max_error = std::max(out.max_error, errors.front());
    // Errors at roundoff level carry no order information.
    const double order = errors.back() > 1e-13 ? fit_slope(spacings, errors) : std::numeric_limits<double>::infinity();
    out.orders.push_back(order);
    out.min_order = std::min(out.min_order, order);
  }
  return out;
}

nlohmann::json LinearizationStudy::to_json() const {
  return {{"n", n},
          {"flat_slopes", flat_slopes},
          {"general_orders", general_orders},
          {"flat_min", flat_min},
          {"flat_max", flat_max},
          {"general_min", general_min},
          {"general_max", general_max}};
}

LinearizationStudy linearization_study(int n, int cases, std::uint64_t seed) {
  require(cases >= 1, "need at least one case");
  LinearizationStudy out;
  out.n = n;
  std::mt19937_64 rng(seed);
  const SymJet g0 = constant_jet(identity(n), n);
  const Background bg = make_background(g0);
  const Mat M0 = rdt_operator(g0, bg);
  for (int k = 0; k < cases; ++k) {
    RandomMetric hh(n, rng(), 6, 1.0);
    const Vec x = random_point(rng, n, 0.5);
    const SymJet hj = point_jet([&](const Vec& y) { return hh.perturbation(y); }, x, n, 0.05);

    const Mat L = lichnerowicz(hj, bg);
    std::vector<double> ss{1e-2, 1e-3, 1e-4}, es;
    for (double s : ss) {
      const Mat Ms = rdt_operator(axpy(g0, s, hj), bg);
      Mat d{};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = (Ms[i][j] - M0[i][j]) / s;
      es.push_back(max_entry(d, L, n));
    }
    out.flat_slopes.push_back(fit_slope(ss, es));

    RandomMetric g(n, rng());
    g.cap_c2_norm(0.2, 1.0);
    const SymJet gj = point_jet(g.fn(), x, n, 0.05);
    const Mat Lg = rdt_linearization(gj, hj, bg);
    std::vector<double> cs{1e-3, 5e-4}, ce;
    for (double s : cs) {
      const Mat mp = rdt_operator(axpy(gj, s, hj), bg), mm = rdt_operator(axpy(gj, -s, hj), bg);
      Mat d{};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = (mp[i][j] - mm[i][j]) / (2 * s);
      ce.push_back(max_entry(d, Lg, n));
    }
    out.general_orders.push_back(std::log(ce[0] / ce[1]) / std::log(cs[0] / cs[1]));
  }
  auto [fmin, fmax] = std::minmax_element(out.flat_slopes.begin(), out.flat_slopes.end());
  auto [gmin, gmax] = std::minmax_element(out.general_orders.begin(), out.general_orders.end());
  out.flat_min = *fmin;
  out.flat_max = *fmax;
  out.general_min = *gmin;
  out.general_max = *gmax;
  return out;
}

nlohmann::json KatoStudy::to_json() const {
  return {{"pairs", pairs}, {"samples", samples}, {"excluded", excluded}, {"min_gap", min_gap}};
}

KatoStudy kato_study(int n, int pairs, int samples_per_pair, std::uint64_t seed) {
  require(pairs >= 1 && samples_per_pair >= 1, "need at least one pair and one sample");
  KatoStudy out;
  out.pairs = pairs;
  out.min_gap = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  const Mat g0inv = identity(n);
  const double step = 1e-4;
  for (int p = 0; p < pairs; ++p) {
    RandomMetric g(n, rng(), 6, 0.08);
    RandomMetric hh(n, rng(), 6, 1.0);
    for (int s = 0; s < samples_per_pair; ++s) {
      const Vec x = random_point(rng, n, 1.0);
      CovJet h;
      h.v = hh.perturbation(x);
      for (int a = 0; a < n; ++a) {
        Vec xp = x, xm = x;
        xp[a] += step;
        xm[a] -= step;
        const Mat hp = hh.perturbation(xp), hm = hh.perturbation(xm);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) h.d[a][i][j] = (hp[i][j] - hm[i][j]) / (2 * step);
      }
      ++out.samples;
      if (norm_h(h.v, g0inv, n) == 0) {
        ++out.excluded;
        continue;
      }
      out.min_gap = std::min(out.min_gap, kato_gap(h, inverse(g(x), n), g0inv, n));
    }
  }
  return out;
}

}  // namespace rdt::tensor
