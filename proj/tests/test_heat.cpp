#include <cmath>

#include "doctest.h"
#include "rdt/common.hpp"
#include "rdt/flow/trajectory.hpp"
#include "rdt/grid/radial_grid.hpp"
#include "rdt/heat/duhamel.hpp"
#include "rdt/heat/estimates.hpp"
#include "rdt/heat/kernel.hpp"

using namespace rdt;
using namespace rdt::heat;

namespace {

Vec point(double x0, double x1 = 0, double x2 = 0, double x3 = 0) { return Vec{x0, x1, x2, x3, 0}; }

RadialSource decaying(double decay) {
  return {[decay](double r) { return std::pow(1 + r * r, -0.5 * decay); }, decay,
          std::numeric_limits<double>::infinity(), "rho^-decay"};
}

}  // namespace

TEST_CASE("kernel on R^4") {
  const KernelSpec k;
  const double t = 0.7;
  const auto v = kernel(k, point(0.3, -0.2), point(0.3, -0.2), t);
  CHECK(v.value == doctest::Approx(std::pow(4 * kPi * t, -2)).epsilon(1e-14));
  CHECK(v.distance == 0);

  const auto xy = kernel(k, point(1, 2, 0, -1), point(0.5, 0, 1, 0), t);
  const auto yx = kernel(k, point(0.5, 0, 1, 0), point(1, 2, 0, -1), t);
  CHECK(xy.value == doctest::Approx(yx.value).epsilon(1e-14));
  CHECK(xy.value > 0);
  CHECK(xy.value == doctest::Approx(gaussian(4, xy.distance, t)).epsilon(1e-14));

  CHECK(std::abs(kernel_mass(k, point(0.4, 0.1), 2.0) - 1) < 1e-9);
  CHECK(semigroup_defect(4, 1.5, 0.3, 0.8) < 1e-8);
  CHECK_THROWS_AS(kernel(k, point(0), point(1), 0.0), PreconditionError);
}

TEST_CASE("quotient kernel") {
  const KernelSpec k{4, 3, 0};
  const auto orb = orbit(k, point(1, 0, 0.5, 0.5));
  REQUIRE(orb.size() == 3);
  for (const auto& y : orb) CHECK(std::hypot(y[0], y[1], std::hypot(y[2], y[3])) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
  CHECK(std::abs(kernel_mass(k, point(0.4, 0.1, 0.2), 1.0) - 1) < 1e-9);

  // Summing only the nearest image of a far pair leaves too much out.
  const KernelSpec cut{4, 3, 1};
  CHECK_THROWS_AS(kernel(cut, point(1, 0), point(-1, 0), 10.0), NumericalError);

  KernelSpec odd{5, 3, 0};
  CHECK_THROWS_AS(odd.validate(), PreconditionError);
  odd.order = 2;
  CHECK_NOTHROW(odd.validate());
}

TEST_CASE("Li-Yau upper bound") {
  const KernelSpec flat;
  const auto s = make_samples(flat, 400, 100, 1e-2, 1e4, 7);
  const auto r = liyau_check(flat, s);
  CHECK(r.passed());
  CHECK(std::abs(r.min_margin) < 1e-12);  // attained on the diagonal
  CHECK(r.samples == 400);

  const KernelSpec z2{4, 2, 0};
  const auto rq = liyau_check(z2, make_samples(z2, 400, 100, 1e-2, 1e4, 7));
  CHECK(rq.C == doctest::Approx(2 * r.C).epsilon(1e-14));
  CHECK(rq.passed());
}

TEST_CASE("gradient bound") {
  const KernelSpec flat;
  const auto s = make_samples(flat, 400, 50, 1e-2, 1e2, 3);
  const auto r = gradient_bound_check(flat, s);
  CHECK(r.passed());
  CHECK(r.max_ratio <= 0.5);
  CHECK(r.max_flat_defect < 1e-10);

  const auto v = kernel(flat, point(0.2), point(0.2), 1.0);
  for (double g : v.gradient) CHECK(g == 0);

  const KernelSpec z3{4, 3, 0};
  const auto train = make_samples(z3, 200, 20, 1e-1, 1e2, 11);
  const double C = calibrate_gradient_constant(z3, train);
  CHECK(C > 0);
  CHECK(C < 1);
  CHECK(gradient_bound_check(z3, train, C).passed());
}

TEST_CASE("samples are deterministic") {
  const KernelSpec k;
  const auto a = make_samples(k, 32, 10, 0.1, 10, 5), b = make_samples(k, 32, 10, 0.1, 10, 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].t == b[i].t);
    CHECK(a[i].x == b[i].x);
  }
  CHECK(a[0].x == a[0].y);
}

TEST_CASE("weighted kernel norm") {
  const KernelSpec k;
  for (double t : {0.1, 3.0, 100.0})
    for (double rx : {0.0, 5.0}) {
      const auto w = weighted_kernel_lp_norm(k, EstimateParams{2, 0, 0}, rx, t);
      CHECK(std::abs(w.value / gaussian_lp_norm(4, 2, t) - 1) < 1e-6);
    }

  const auto mid = weighted_kernel_lp_norm(k, EstimateParams{2, 1, 1}, 10, 2);
  CHECK(mid.region_I + mid.region_II == doctest::Approx(mid.value * mid.value).epsilon(1e-12));
  CHECK_FALSE(mid.near_boundary);
  CHECK(weighted_kernel_lp_norm(k, EstimateParams{2, 0, 1.95}, 0, 1e4).near_boundary);

  CHECK_THROWS_AS(weighted_kernel_lp_norm(k, EstimateParams{2, 0, 2}, 0, 1), PreconditionError);
  CHECK_THROWS_AS(weighted_kernel_lp_norm(k, EstimateParams{0.5, 0, 0}, 0, 1), PreconditionError);
  CHECK_THROWS_AS(weighted_kernel_lp_norm(KernelSpec{4, 2, 0}, EstimateParams{}, 0, 1), PreconditionError);
}

TEST_CASE("weighted norm calibration") {
  const KernelSpec k;
  NormSweep sweep;
  sweep.nt = 3;
  sweep.nrho = 3;
  const auto rec = calibrate_weighted_norm(k, EstimateParams{2, 1, 1}, sweep);
  CHECK(rec.passed);
  CHECK(rec.constants["stability"].get<double>() <= 2);
  const auto again = calibrate_weighted_norm(k, EstimateParams{2, 1, 1}, sweep);
  CHECK(rec.canonical() == again.canonical());
}

TEST_CASE("convolution clause a") {
  const KernelSpec k3{3, 1, 0};
  const auto r = convolution_bound_check(k3, EstimateParams{2, 0, 0}, decaying(2), Clause::kA, 1.0, {0.1, 1, 10});
  CHECK(r.passed());
  CHECK(r.params.b == doctest::Approx(2));
  CHECK(r.to_record(k3).bound_id == "heat.convolution_a");
  // ρ^{−2} is not square integrable on ℝ⁴.
  CHECK_THROWS_AS(convolution_bound_check(KernelSpec{}, EstimateParams{2, 0, 0}, decaying(2), Clause::kA, 1.0, {1}),
                  PreconditionError);
  CHECK_THROWS_AS(convolution_bound_check(k3, EstimateParams{2, 0, 0, 3}, decaying(2), Clause::kA, 1.0, {1}),
                  PreconditionError);
}

TEST_CASE("convolution clause b") {
  const KernelSpec k;
  const auto r = convolution_bound_check(k, EstimateParams{1.5, 0, 0.5, 1.5}, decaying(3), Clause::kB, 2.0, {0.5});
  CHECK(r.passed());
  CHECK(r.params.c == doctest::Approx(3));
  CHECK_THROWS_AS(convolution_bound_check(k, EstimateParams{2, 0, 0, 2}, decaying(3), Clause::kB, 2.0, {1}),
                  PreconditionError);
}

TEST_CASE("convolution clause c") {
  const KernelSpec k;
  RadialSource bump{[](double r) { return r < 2 ? std::pow(1 - r * r / 4, 2) : 0.0; }, 0, 2, "bump"};
  const auto r = convolution_bound_check(k, EstimateParams{1, 0, 0, 2}, bump, Clause::kC, 2.0, {0.1, 4, 400});
  CHECK(r.passed());
  CHECK(r.samples[0].bound == doctest::Approx(source_norm(4, bump, 2)));
  CHECK(r.sharp_min_margin >= 0);
}

TEST_CASE("Duhamel constants") {
  const auto k = duhamel_constants(2, 1);
  CHECK(k.C == 4);
  CHECK(k.c == doctest::Approx(3.0 / 8));
  CHECK_THROWS_AS(duhamel_constants(1, 1), PreconditionError);
}

TEST_CASE("Duhamel residual") {
  auto g = std::make_shared<const grid::RadialGrid>(4, 64, 100);
  std::vector<double> ts{0};
  for (int k = 0; k <= 32; ++k) ts.push_back(1e-2 * std::pow(10, k / 16.0));
  DuhamelOptions o;
  o.max_times = 2;
  o.radii = 2;

  const auto zero = duhamel_residual(embedded_heat_history(g, 0, 1, ts), 2, o);
  for (const auto& s : zero.samples) {
    CHECK(s.lhs == 0);
    CHECK(s.initial == 0);
  }

  const auto heat = duhamel_residual(embedded_heat_history(g, 1e-2, 1, ts), 2, o);
  CHECK(heat.passed());
  CHECK(heat.min_residual >= -1e-6);

  std::vector<double> sparse{0, 1e-2, 1e-1, 1};
  CHECK_THROWS_AS(duhamel_residual(embedded_heat_history(g, 1e-2, 1, sparse), 2, o), PreconditionError);
  CHECK_THROWS_AS(duhamel_residual(embedded_heat_history(g, 0.9, 1, ts), 2, o), PreconditionError);
}

TEST_CASE("linear model matches the heat equation") {
  flow::FlowConfig c;
  c.model = "linear";
  c.T = 1;
  c.nodes = 128;
  c.r_max = 1e3;
  c.snapshots_per_decade = 4;
  const auto tr = flow::run(c);
  REQUIRE(tr.completed);
  const double t = tr.times.back();
  const auto& s = tr.states.back();
  const auto u0 = [&](double r) { return c.eps * flow::shape_a(c, r); };
  for (int i = 0; i < s.size(); ++i) {
    const double r = s.grid->r(i);
    if (r > 10) break;
    const double exact = heat_evolve_radial(4, u0, r, t).u;
    CHECK(std::abs(s.a[static_cast<std::size_t>(i)] - 1 - exact) < 1e-4 * c.eps);
    CHECK(s.a[static_cast<std::size_t>(i)] == doctest::Approx(s.b[static_cast<std::size_t>(i)]).epsilon(1e-14));
  }
}
