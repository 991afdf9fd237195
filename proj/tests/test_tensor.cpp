#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "rdt/common.hpp"
#include "rdt/grid/radial_grid.hpp"
#include "rdt/tensor/metrics.hpp"
#include "rdt/tensor/patch_fields.hpp"

using namespace rdt;
using namespace rdt::tensor;

namespace {

// Patch of resolution 9 and spacing h around c.
CartesianPatch patch(int n, const Vec& c, double h) { return CartesianPatch(n, c, 4 * h, 9); }

double slope(const std::vector<double>& hs, const std::vector<double>& es) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double x = std::log(hs[i]), y = std::log(es[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double max_entry(const Mat& m, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s = std::max(s, std::abs(m[i][j]));
  return s;
}

const std::vector<double> kSpacings{0.2, 0.1, 0.05};

}  // namespace

TEST_CASE("Christoffel symbols") {
  const int n = 4;
  CartesianPatch P = patch(n, Vec{0.3, -0.2, 0.1, 0.0}, 0.1);
  for (const MetricFn& fn : {euclidean_metric(n), scaled_metric(n, 2.5)}) {
    auto G = christoffels(SymTensor2Field::sample(P, fn));
    CHECK(max_abs(G) == 0.0);
  }
  const double eps = 1e-2;
  MetricFn f = [&](const Vec& x) {
    Mat m{};
    for (int i = 0; i < n; ++i) m[i][i] = 1 + eps * x[0] * x[0];
    return m;
  };
  auto G = christoffels(SymTensor2Field::sample(P, f));
  double worst = 0;
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (!G.valid(k)) continue;
    const Vec x = P.point(k);
    const double fx = 1 + eps * x[0] * x[0];
    Vec df{};
    df[0] = 2 * eps * x[0];
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double ex = ((a == i) * df[j] + (a == j) * df[i] - (i == j) * df[a]) / (2 * fx);
          worst = std::max(worst, std::abs(G.at(k)[(a * n + i) * n + j] - ex));
        }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("curvature") {
  SUBCASE("flat") {
    CartesianPatch P = patch(4, Vec{}, 0.1);
    auto c = curvature(SymTensor2Field::sample(P, scaled_metric(4, 3.0)));
    CHECK(max_abs(c.ricci) == 0.0);
    CHECK(max_abs(c.rm_norm) == 0.0);
  }
  SUBCASE("round sphere") {
    const int n = 3;
    CartesianPatch P = patch(n, Vec{0.3, 0.1, 0.0}, 0.025);
    auto g = SymTensor2Field::sample(P, sphere_metric(n));
    auto c = curvature(g);
    for (std::size_t k = 0; k < P.node_count(); ++k) {
      if (!c.ricci.valid(k)) continue;
      const Mat gv = g.get(k);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) CHECK(c.rm[k][i][j][j][i] / (gv[i][i] * gv[j][j]) == doctest::Approx(1.0).epsilon(1e-5));
    }
  }
  SUBCASE("random metrics: symmetries and refinement") {
    const int n = 4;
    for (int seed = 1; seed <= 3; ++seed) {
      RandomMetric rm(n, static_cast<std::uint64_t>(seed));
      rm.cap_c2_norm(0.2, 1.0);
      std::vector<double> pair, route;
      for (double h : kSpacings) {
        CartesianPatch P = patch(n, Vec{0.1 * seed, -0.1, 0.05, 0.0}, h);
        auto g = SymTensor2Field::sample(P, rm.fn());
        auto a = curvature(g);
        auto b = curvature_from_christoffels(g);
        CHECK(a.max_bianchi_residual < 1e-10);
        CHECK(b.max_bianchi_residual < 1e-10);
        CHECK(a.max_antisymmetry < 1e-12);
        pair.push_back(b.max_pair_residual);
        route.push_back(max_difference(a.ricci, b.ricci));
      }
      CHECK(slope(kSpacings, pair) >= 1.9);
      CHECK(slope(kSpacings, route) >= 1.9);
    }
  }
}

TEST_CASE("DeTurck vector") {
  const int n = 4;
  CartesianPatch P = patch(n, Vec{0.1, 0.0, -0.2, 0.3}, 0.1);
  RandomMetric g0(n, 5);
  g0.cap_c2_norm(0.2, 1.0);
  CHECK(max_abs(deturck_vector(PatchMetric::sample(P, g0.fn(), g0.fn()))) == 0.0);
  MetricFn scaled = [&](const Vec& x) {
    Mat m = g0(x);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m[i][j] *= 1.7;
    return m;
  };
  CHECK(max_abs(deturck_vector(PatchMetric::sample(P, scaled, g0.fn()))) < 1e-13);

  for (int seed = 11; seed <= 13; ++seed) {
    RandomMetric g(n, static_cast<std::uint64_t>(seed));
    g.cap_c2_norm(0.2, 1.0);
    std::vector<double> e;
    for (double h : kSpacings) {
      auto pm = PatchMetric::sample(patch(n, Vec{0.05, 0.1, 0, 0}, h), g.fn(), g0.fn());
      e.push_back(max_difference(deturck_vector(pm), deturck_vector_global(pm)));
    }
    CHECK(slope(kSpacings, e) >= 1.9);
  }
}

TEST_CASE("Ricci-DeTurck operator") {
  const int n = 4;
  CartesianPatch P = patch(n, Vec{0.1, 0.0, 0.0, 0.2}, 0.1);
  SUBCASE("fixed points") {
    CHECK(max_abs(ricci_deturck(PatchMetric::sample(P, euclidean_metric(n), euclidean_metric(n)))) == 0.0);
    CHECK(max_abs(ricci_deturck(PatchMetric::sample(P, scaled_metric(n, 1.3), euclidean_metric(n)))) == 0.0);
    CHECK(max_abs(ricci_deturck_oracle(PatchMetric::sample(P, euclidean_metric(n), euclidean_metric(n)))) == 0.0);
  }
  SUBCASE("oracle equivalence on random metrics") {
    for (int seed = 21; seed <= 25; ++seed) {
      RandomMetric g(n, static_cast<std::uint64_t>(seed));
      g.cap_c2_norm(0.2, 1.0);
      std::vector<double> e;
      for (double h : kSpacings) {
        auto pm = PatchMetric::sample(patch(n, Vec{0.05 * seed - 1.1, 0.1, 0, 0}, h), g.fn(), euclidean_metric(n));
        auto M = ricci_deturck(pm);
        e.push_back(max_difference(M, ricci_deturck_oracle(pm)));
        CHECK(max_difference(M, ricci_deturck_ricci_flat(pm)) < 1e-12);
        CHECK(M.max_asymmetry() == 0.0);
      }
      CHECK(slope(kSpacings, e) >= 1.9);
    }
  }
  SUBCASE("conformal and anisotropic perturbations") {
    const std::vector<MetricFn> cases{conformal_gaussian(n, 1e-3, Vec{0.1, 0, 0, 0}, 1.0),
                                      conformal_gaussian(3, 1e-2, Vec{}, 0.8),
                                      anisotropic_diagonal(n, Vec{0.02, -0.01, 0.015, 0.005}, 1.2)};
    const std::vector<int> dims{n, 3, n};
    for (std::size_t c = 0; c < cases.size(); ++c) {
      std::vector<double> e;
      for (double h : kSpacings) {
        Vec ctr{};
        ctr[0] = 0.3;
        auto pm = PatchMetric::sample(patch(dims[c], ctr, h), cases[c], euclidean_metric(dims[c]));
        e.push_back(max_difference(ricci_deturck(pm), ricci_deturck_oracle(pm)));
      }
      CHECK(slope(kSpacings, e) >= 1.9);
    }
  }
  SUBCASE("a diffeomorphism pull-back is not a fixed point") {
    auto pm = PatchMetric::sample(patch(n, Vec{}, 0.1),
                                  bump_diffeomorphism_pullback(n, 0.05, Vec{}, 1.0, Vec{1, 0.5, 0, 0}),
                                  euclidean_metric(n));
    const double tol = max_difference(ricci_deturck(pm), ricci_deturck_oracle(pm));
    CHECK(max_abs(ricci_deturck(pm)) > 10 * tol);
    CHECK(max_abs(ricci_deturck(pm)) > 1e-4);
  }
}

TEST_CASE("Lichnerowicz Laplacian and linearisation") {
  const int n = 4;
  CartesianPatch P = patch(n, Vec{0.2, 0.0, 0.0, 0.0}, 0.1);
  RandomMetric hh(n, 99, 6, 1.0);
  MetricFn hfn = [&](const Vec& x) { return hh.perturbation(x); };
  auto H = SymTensor2Field::sample(P, hfn);
  auto flat = SymTensor2Field::sample(P, euclidean_metric(n));
  const std::size_t k = P.center_node();

  SUBCASE("flat background gives the componentwise Laplacian") {
    auto L = lichnerowicz(H, flat);
    for (std::size_t node = 0; node < P.node_count(); ++node) {
      if (!L.valid(node)) continue;
      const SymJet j = H.jet(node);
      const Mat l = L.get(node);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double lap = 0;
          for (int c = 0; c < n; ++c) lap += j.dd[c][c][a][b];
          CHECK(std::abs(l[a][b] - lap) < 1e-12);
        }
    }
    CHECK(max_abs(lichnerowicz(flat, flat)) == 0.0);
  }
  SUBCASE("at g = g0 the linearisation is Lichnerowicz") {
    auto pm = PatchMetric::sample(P, euclidean_metric(n), euclidean_metric(n));
    CHECK(max_difference(linearized_rdt(pm, H), lichnerowicz(H, flat)) < 1e-14);
    auto zero = SymTensor2Field::sample(P, [](const Vec&) { return Mat{}; });
    CHECK(max_abs(linearized_rdt(pm, zero)) == 0.0);
  }
  SUBCASE("one-sided difference quotient at g0 is O(s)") {
    const SymJet g0 = constant_jet(identity(n), n);
    const Background bg = make_background(g0);
    const SymJet hj = H.jet(k);
    const Mat L = lichnerowicz(hj, bg);
    const Mat M0 = rdt_operator(g0, bg);
    std::vector<double> ss{1e-2, 1e-3, 1e-4}, es;
    for (double s : ss) {
      const Mat Ms = rdt_operator(axpy(g0, s, hj), bg);
      Mat d{};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = (Ms[i][j] - M0[i][j]) / s - L[i][j];
      es.push_back(max_entry(d, n));
    }
    const double p = slope(ss, es);
    CHECK(p >= 0.8);
    CHECK(p <= 1.2);
  }
  SUBCASE("central difference at a general g is O(s^2)") {
    for (int seed = 31; seed <= 40; ++seed) {
      RandomMetric g(n, static_cast<std::uint64_t>(seed));
      g.cap_c2_norm(0.2, 1.0);
      auto pm = PatchMetric::sample(P, g.fn(), euclidean_metric(n));
      const SymJet gj = pm.g.jet(k), g0 = pm.g0.jet(k), hj = H.jet(k);
      const Background bg = make_background(g0);
      const Mat L = rdt_linearization_compact(gj, g0, hj, bg);
      const Mat Ld = rdt_linearization(gj, hj, bg);
      Mat d{};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = L[i][j] - Ld[i][j];
      CHECK(max_entry(d, n) < 1e-12);
      std::vector<double> ss{1e-3, 5e-4}, es;
      for (double s : ss) {
        const Mat mp = rdt_operator(axpy(gj, s, hj), bg), mm = rdt_operator(axpy(gj, -s, hj), bg);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) d[i][j] = (mp[i][j] - mm[i][j]) / (2 * s) - L[i][j];
        es.push_back(max_entry(d, n));
      }
      CHECK(es[0] / es[1] >= 3.5);
    }
  }
  SUBCASE("published closed-form coefficients against the verified ones") {
    RandomMetric g(n, 7);
    g.cap_c2_norm(0.2, 1.0);
    auto pm = PatchMetric::sample(P, g.fn(), euclidean_metric(n));
    const SymJet gj = pm.g.jet(k), g0 = pm.g0.jet(k);
    const Background bg = make_background(g0);
    const FGTensors a = fg_tensors(gj, g0, bg), b = fg_tensors_closed_form(gj, g0, bg);
    double dF = 0, dG = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m)
          for (int q = 0; q < n; ++q) {
            dG = std::max(dG, std::abs(a.G[i][j][m][q] - b.G[i][j][m][q]));
            for (int c = 0; c < n; ++c) dF = std::max(dF, std::abs(a.F[i][j][c][m][q] - b.F[i][j][c][m][q]));
          }
    MESSAGE("closed-form F mismatch " << dF << ", G mismatch " << dG);
    CHECK(dF < 1e-14);
    // The quadratic block of the printed G differs from the first variation.
    CHECK(dG > 1e-8);
    CHECK(norm_F(a, g0.v, bg.conn.ginv) > 0);
    CHECK(norm_G(a, g0.v, bg.conn.ginv) > 0);
  }
}

TEST_CASE("Kato inequality") {
  const int n = 4;
  CartesianPatch P = patch(n, Vec{0.1, 0.2, 0.0, 0.0}, 0.1);
  auto flat = SymTensor2Field::sample(P, euclidean_metric(n));
  SUBCASE("rank-one direction is the equality case") {
    Mat E{};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) E[i][j] = 1.0 / (1 + i + j);
    auto h = SymTensor2Field::sample(P, [&](const Vec& x) {
      Mat m = E;
      const double u = 1 + 0.5 * std::sin(x[0] + 2 * x[1]);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] *= u;
      return m;
    });
    auto res = kato_gap(h, flat, flat);
    CHECK(std::abs(res.min_gap) < 1e-12);
    CHECK(res.excluded == 0);
  }
  SUBCASE("random h, flat and lambda = 1.1 metrics") {
    for (int seed = 41; seed <= 44; ++seed) {
      RandomMetric hh(n, static_cast<std::uint64_t>(seed), 6, 1.0);
      auto h = SymTensor2Field::sample(P, [&](const Vec& x) { return hh.perturbation(x); });
      CHECK(kato_gap(h, flat, flat).min_gap >= -1e-10);
      RandomMetric g(n, static_cast<std::uint64_t>(seed + 100), 6, 0.08);
      auto pm = PatchMetric::sample(P, g.fn(), euclidean_metric(n));
      CHECK(pm.closeness_lambda() <= 1.1);
      CHECK(kato_gap(h, pm.g, flat).min_gap >= -1e-10);
    }
  }
  SUBCASE("zero tensor nodes are excluded") {
    auto zero = SymTensor2Field::sample(P, [](const Vec&) { return Mat{}; });
    auto res = kato_gap(zero, flat, flat);
    CHECK(res.excluded > 0);
  }
}

TEST_CASE("curvature decay of the ALE model") {
  const int n = 4;
  const double tau = 2.0;
  auto g = ale_power_metric(n, tau);
  auto weighted = [&](double step) {
    double worst = 0;
    for (double r = 2.0; r <= 64.0; r *= 1.25) {
      const Vec x{r, 0, 0, 0};
      const Connection c = connection(point_jet(g, x, n, step * r));
      const R4 rm = riemann(c, n);
      double s = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) s += rm[a][b][p][q] * rm[a][b][p][q];
      worst = std::max(worst, std::pow(grid::rho(r), tau + 2) * std::sqrt(s));
    }
    return worst;
  };
  const double a = weighted(1e-2), b = weighted(5e-3);
  MESSAGE("sup rho^(tau+2)|Rm| = " << b);
  CHECK(std::isfinite(b));
  CHECK(std::abs(a - b) / b < 1e-3);
}

TEST_CASE("patch metric validation") {
  const int n = 3;
  CartesianPatch P = patch(n, Vec{}, 0.1);
  auto bad = PatchMetric::sample(P, [](const Vec&) {
    Mat m = identity(3);
    m[2][2] = -1;
    return m;
  }, euclidean_metric(n));
  CHECK_THROWS_AS(bad.validate(), NumericalError);
  auto sing = PatchMetric::sample(P, [](const Vec&) { return Mat{}; }, euclidean_metric(n));
  CHECK_THROWS_AS(christoffels(sing.g), NumericalError);
  CHECK_THROWS_AS(CartesianPatch(n, Vec{}, 1.0, 6), PreconditionError);
}
