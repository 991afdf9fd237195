#include <cmath>
#include <random>

#include "doctest.h"
#include "rdt/barriers/barriers.hpp"
#include "rdt/common.hpp"

using namespace rdt;
using namespace rdt::barriers;

namespace {

std::vector<double> param_axis() { return {0.25, 0.5, 1.0, 1.7, 2.5, 4.0}; }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

VerificationGrid coarse_grid(int n) {
  VerificationGrid g;
  g.nr = n;
  g.nt = n;
  return g;
}

}  // namespace

TEST_CASE("chi closed forms") {
  CHECK(kummer_chi({1, 1}, 0).value == doctest::Approx(1.0).epsilon(1e-15));
  for (double u : {1e-3, 0.1, 1.0, 5.0, 50.0, 200.0, 1e4}) {
    const double exact = -std::expm1(-u) / u;
    CHECK(std::abs(chi_integral(1, 1, u) - exact) <= 1e-12);
  }
  // χ_{1,1}′ = −χ_{2,1} = −(1 − (1+u)e^{−u})/u².
  const double u = 3.0;
  CHECK(kummer_chi({1, 1}, u).d1 == doctest::Approx(-(1 - (1 + u) * std::exp(-u)) / (u * u)).epsilon(1e-13));
}

TEST_CASE("chi beta identity at u = 0") {
  for (double a : param_axis())
    for (double b : param_axis()) {
      CHECK(rel(chi_integral(a, b, 0), beta_function(a, b)) <= 1e-10);
      // (a+b) χ′(0) + a χ(0) = 0 because B(a+1,b) = a B(a,b)/(a+b).
      CHECK(std::abs(chi_ode_residual({a, b}, 0)) <= 1e-10 * beta_function(a, b));
    }
}

TEST_CASE("chi ODE residual over the parameter box") {
  double worst = 0;
  for (double a : param_axis())
    for (double b : param_axis())
      for (double u : {0.0, 0.01, 0.1, 1.0, 3.0, 10.0, 30.0, 75.0, 120.0, 200.0}) {
        const double r = std::abs(chi_ode_residual({a, b}, u));
        worst = std::max(worst, r);
      }
  CHECK(worst <= 1e-8);
  for (double u : {0.0, 1.0, 10.0, 100.0}) CHECK(std::abs(chi_ode_residual({1.7, 0.4}, u)) <= 1e-8);
  CHECK(std::abs(chi_ode_residual({1, 1}, 1.0)) <= 1e-8);
}

TEST_CASE("chi large-u asymptotics") {
  // χ(u) u^a / Γ(a) = 1 − a(b−1)/u + O(u⁻²).
  const double r200 = kummer_chi({2, 3}, 200).value * 200 * 200 / std::tgamma(2.0);
  CHECK(std::abs(r200 - 1) <= 0.02);
  const double r50 = kummer_chi({2, 3}, 50).value * 50 * 50;
  CHECK(r50 >= 0.9);
  CHECK(r50 <= 1.1);
  for (double a : param_axis())
    for (double b : param_axis()) {
      const double u = 1e5;
      const double ratio = chi_integral(a, b, u) * std::pow(u, a) / std::tgamma(a);
      CHECK(std::abs(ratio - 1 + a * (b - 1) / u) <= 40.0 / (u * u) * (1 + a * a) * (1 + b * b));
    }
}

TEST_CASE("chi monotonicity, convexity and calibrated bounds") {
  const auto us = chi_sample_grid(1e3, 120);
  for (double a : {0.25, 1.0, 4.0})
    for (double b : {0.25, 1.0, 4.0}) {
      const ChiBounds cb = calibrate_chi_bounds({a, b}, us);
      CHECK(cb.decreasing);
      CHECK(cb.convex);
      CHECK(cb.c_ratio > 0);
      CHECK(cb.c_ratio <= cb.C_ratio);
      CHECK(cb.c_d1 > 0);
      CHECK(cb.c_d2 > 0);
      CHECK(std::isfinite(cb.C_d1));
      CHECK(std::isfinite(cb.C_d2));
      // Refining the sample grid moves each constant by less than a factor 2.
      const ChiBounds fine = calibrate_chi_bounds({a, b}, chi_sample_grid(1e3, 240));
      for (auto [x, y] : {std::pair{cb.c_ratio, fine.c_ratio}, {cb.C_ratio, fine.C_ratio}, {cb.c_d1, fine.c_d1},
                          {cb.C_d1, fine.C_d1}, {cb.c_d2, fine.c_d2}, {cb.C_d2, fine.C_d2}}) {
        CHECK(y / x < 2.0);
        CHECK(x / y < 2.0);
      }
    }
}

TEST_CASE("chi input validation") {
  CHECK_THROWS_AS(kummer_chi({0, 1}, 1), PreconditionError);
  CHECK_THROWS_AS(kummer_chi({1, -1}, 1), PreconditionError);
  CHECK_THROWS_AS(kummer_chi({1, 1}, -1e-9), PreconditionError);
}

TEST_CASE("delta_mu on closed forms") {
  for (double mu : {1.0, 2.5, 4.0}) {
    RadialJet sq{0, 0, 2, 0, 2};
    for (double r : {0.0, 0.5, 3.0}) {
      sq.v = r * r;
      sq.dr = 2 * r;
      CHECK(delta_mu_apply({mu}, sq) == doctest::Approx(2 * mu).epsilon(1e-15));
      CHECK(delta_mu_apply({mu}, [](double x) { return x * x; }, r, 1e-2, true) ==
            doctest::Approx(2 * mu).epsilon(1e-9));
    }
  }
  for (double mu : {2.5, 4.0, 5.5})
    for (double r : {0.3, 1.0, 7.0}) {
      const double p = 2 - mu;
      RadialJet h{std::pow(r, p), p * std::pow(r, p - 1), p * (p - 1) * std::pow(r, p - 2), 0, p * std::pow(r, p - 2)};
      CHECK(std::abs(delta_mu_apply({mu}, h)) <= 1e-12 * std::abs(h.drr));
      auto f = [p](double x) { return std::pow(x, p); };
      CHECK(std::abs(delta_mu_apply({mu}, f, r, r * 1e-2, false)) <= 1e-6 * std::abs(h.drr));
    }
  // f = (r²+t+1)^{−a/2}.
  for (double a : {0.5, 1.5, 3.5})
    for (double mu : {1.0, 3.9, 4.0})
      for (double t : {0.0, 2.0, 100.0})
        for (double r : {0.0, 0.1, 1.0, 10.0, 1e3}) {
          const double Q = r * r + t + 1;
          RadialJet j;
          j.v = std::pow(Q, -a / 2);
          j.dr_over_r = -a * std::pow(Q, -a / 2 - 1);
          j.dr = j.dr_over_r * r;
          j.drr = -a * std::pow(Q, -a / 2 - 1) + a * (a + 2) * r * r * std::pow(Q, -a / 2 - 2);
          const double closed = a * ((a + 2 - mu) * r * r - mu * (t + 1)) / std::pow(Q, a / 2 + 2);
          CHECK(std::abs(delta_mu_apply({mu}, j) - closed) <= 1e-10 * std::max(std::abs(closed), std::pow(Q, -a / 2 - 1)));
        }
  CHECK_THROWS_AS(delta_mu_apply({0.5}, RadialJet{}), PreconditionError);
  CHECK_THROWS_AS(delta_mu_apply({2}, [](double x) { return x; }, 0.0, 1e-2, false), PreconditionError);
}

TEST_CASE("barrier F heat equation and limits") {
  const BarrierSpec s{2, 1, 3.9, 1e-2};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double r = i % 10 == 0 ? 0.0 : std::pow(10.0, -3 + 6 * U(rng));
    const double t = std::pow(10.0, -2 + 8 * U(rng));
    const RadialJet j = barrier_F(s, r, t);
    worst = std::max(worst, std::abs(j.dt - delta_mu_apply({s.nu}, j)));
  }
  CHECK(worst <= 1e-8);

  for (const BarrierSpec& sp : {s, BarrierSpec{1.0, 0.5, 3.0, 0.1}, BarrierSpec{3.5, 1.5, 3.95, 1e-2}}) {
    const double a = sp.k / 2, b = (sp.nu - sp.k) / 2;
    for (double t : {1e-2, 1.0, 1e4}) {
      const double oracle = beta_function(a, b) / (std::pow(2.0, sp.k) * std::tgamma(a) * std::pow(t, a));
      CHECK(rel(barrier_F(sp, 0, t).v, oracle) <= 1e-10);
    }
    for (double r : {0.1, 1.0, 30.0}) {
      const double t = r * r / (4 * 1e4);
      CHECK(std::abs(barrier_F(sp, r, t).v * std::pow(r, sp.k) - 1) <= 0.01);
    }
  }
  CHECK_THROWS_AS(barrier_F(s, 1, 0), PreconditionError);
  CHECK_THROWS_AS(barrier_F(s, -1, 1), PreconditionError);
  CHECK_THROWS_AS(barrier_F(BarrierSpec{4, 1, 3.9, 1e-2}, 1, 1), PreconditionError);
}

TEST_CASE("barrier F analytic derivatives agree with differences") {
  const BarrierSpec s{2.5, 1, 3.7, 1e-2};
  for (double r : {0.3, 2.0, 20.0})
    for (double t : {0.5, 5.0}) {
      const RadialJet j = barrier_F(s, r, t);
      const double h = 1e-4 * r, ht = 1e-4 * t;
      const double dr = (barrier_F(s, r + h, t).v - barrier_F(s, r - h, t).v) / (2 * h);
      const double dt = (barrier_F(s, r, t + ht).v - barrier_F(s, r, t - ht).v) / (2 * ht);
      CHECK(rel(j.dr, dr) <= 1e-6);
      CHECK(rel(j.dt, dt) <= 1e-6);
      auto f = [&](double x) { return barrier_F(s, x, t).v; };
      CHECK(rel(delta_mu_apply({s.nu}, f, r, h * 100, true), delta_mu_apply({s.nu}, j)) <= 1e-5);
    }
}

TEST_CASE("barrier F sandwich and supersolution") {
  const BarrierSpec s{2, 1, 3.9, 1e-2};
  const VerificationGrid g;
  const CalibrationRecord sw = calibrate_F_sandwich(s, g);
  CHECK(sw.passed);
  const double c = sw.constants.at("c"), C = sw.constants.at("C");
  CHECK(c > 0);
  CHECK(c <= C);
  for (double r : g.r_nodes())
    for (double t : {1e-2, 3.0, 1e6}) {
      const double q = barrier_F(s, r, t).v * std::pow(r * r + t, s.k / 2);
      CHECK(q >= c);
      CHECK(q <= C);
    }

  const CalibrationRecord eq = supersolution_margin_F(s, s.nu, g);
  CHECK(eq.passed);
  CHECK(eq.constants.at("max_abs_residual").get<double>() <= 1e-8);

  const CalibrationRecord sup = supersolution_margin_F(s, s.nu + 1, g);
  CHECK(sup.passed);
  CHECK(sup.constants.at("c").get<double>() > 0);
  CHECK(sup.min_margin > 0);
  CHECK_THROWS_AS(supersolution_margin_F(s, s.nu - 0.5, g), PreconditionError);
}

TEST_CASE("barrier G structure and derivative bounds") {
  const BarrierSpec s{3.5, 1.5, 3.95, 1e-2};
  CHECK(barrier_G(s, 0, 0).v == doctest::Approx(s.eps * s.eps + barrier_F(s, 0, 1).v).epsilon(1e-15));
  const VerificationGrid g = coarse_grid(60);
  for (double r : g.r_nodes())
    for (double t : g.t_nodes()) CHECK(barrier_G(s, r, t).v >= barrier_G_lower(s, r, t));

  const CalibrationRecord d = calibrate_G_derivative(s, VerificationGrid{});
  CHECK(d.passed);
  const double c = d.constants.at("c"), C = d.constants.at("C");
  CHECK(c > 0);
  CHECK(C >= c);
  for (double r : {0.01, 1.0, 100.0})
    for (double t : {0.01, 10.0, 1e5}) {
      const RadialJet j = barrier_G(s, r, t);
      const double w = r * j.v / (r * r + 1);
      CHECK(-j.dr >= c * w * (1 - 1e-12));
      CHECK(-j.dr <= C * w * (1 + 1e-12));
    }

  CHECK_THROWS_AS(barrier_G(BarrierSpec{3.5, 1.5, 2.0, 1e-2}, 1, 1), PreconditionError);
  CHECK_THROWS_AS(barrier_G(BarrierSpec{1.0, 1.5, 3.95, 1e-2}, 1, 1), PreconditionError);
  CHECK_THROWS_AS(barrier_G(BarrierSpec{3.5, 2.0, 3.95, 1e-2}, 1, 1), PreconditionError);
  CHECK_THROWS_AS(barrier_G(s, 1, -1), PreconditionError);
}

TEST_CASE("barrier G supersolution margin") {
  const BarrierSpec s{3.5, 1.5, 4 - 0.05, 1e-2};
  const CalibrationRecord rec = supersolution_margin_G(s, 4.0, VerificationGrid{});
  CHECK(rec.passed);
  CHECK(rec.min_margin > 0);
  CHECK(rec.constants.at("c").get<double>() > 0);
  CHECK(rec.constants.at("c").get<double>() < rec.constants.at("c_max").get<double>());
  CHECK_THROWS_AS(supersolution_margin_G(s, s.nu + 0.5 * s.eps, VerificationGrid{}), PreconditionError);

  const double eps_max = largest_admissible_eps(s, 4.0, coarse_grid(40), 1e-4, 1.0);
  CHECK(eps_max >= s.eps);
}

TEST_CASE("calibration records are reproducible") {
  const BarrierSpec s{3.5, 1.5, 3.95, 1e-2};
  const VerificationGrid g = coarse_grid(50);
  const CalibrationRecord a = supersolution_margin_G(s, 4.0, g);
  CalibrationRecord b = supersolution_margin_G(s, 4.0, g);
  b.timestamp = "2026-01-01T00:00:00Z";
  CHECK(a.canonical() == b.canonical());
  CHECK(a.run_id() == b.run_id());
  CHECK(a.run_id().size() == 12);

  const CalibrationRecord back = CalibrationRecord::from_json(nlohmann::json::parse(b.to_json().dump()));
  CHECK(back.canonical() == a.canonical());
  CHECK(back.timestamp == b.timestamp);
  CHECK(reverify(back));

  CalibrationRecord tampered = back;
  tampered.constants["c"] = tampered.constants["c"].get<double>() * (1 + 1e-15) + 1e-300;
  CHECK_FALSE(reverify(tampered));

  for (const CalibrationRecord& r :
       {calibrate_F_sandwich({2, 1, 3.9, 1e-2}, g), calibrate_G_derivative(s, g),
        supersolution_margin_F({2, 1, 3.9, 1e-2}, 4.9, g), calibrate_chi({1.5, 0.5}, chi_sample_grid(1e3, 40))})
    CHECK(reverify(r));

  CalibrationRecord unknown = a;
  unknown.bound_id = "nope";
  CHECK_THROWS_AS(reverify(unknown), PreconditionError);
}
