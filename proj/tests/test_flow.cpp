#include <cmath>

#include "doctest.h"
#include "rdt/flow/monitors.hpp"
#include "rdt/tensor/metrics.hpp"
#include "rdt/tensor/patch_fields.hpp"

using namespace rdt;
using namespace rdt::flow;

namespace {

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

// a = 1 + ε e^{−r²}, b = 1 + ε₂ r² e^{−r²}, with exact derivatives.
struct Gaussian {
  double ea = 1e-3, eb = 0.0;
  double a(double r) const { return 1 + ea * std::exp(-r * r); }
  double b(double r) const { return 1 + eb * r * r * std::exp(-r * r); }
  RadialData data(double r) const {
    const double e = std::exp(-r * r);
    RadialData d;
    d.a = a(r);
    d.a1 = ea * (-2 * r) * e;
    d.a2 = ea * (4 * r * r - 2) * e;
    d.b = b(r);
    d.b1 = eb * (2 * r - 2 * r * r * r) * e;
    d.b2 = eb * (2 - 10 * r * r + 4 * r * r * r * r) * e;
    return d;
  }
};

FlowConfig short_config() {
  FlowConfig c;
  c.T = 1;
  c.nodes = 96;
  c.r_max = 1e3;
  c.snapshots_per_decade = 8;
  return c;
}

}  // namespace

TEST_CASE("reduced operator fixed points") {
  for (double c : {1.0, 0.7, 2.5}) {
    auto g = std::make_shared<const grid::RadialGrid>(4, 96, 100.0);
    RadialFlowState s = RadialFlowState::flat(g);
    for (std::size_t i = 0; i + 1 < s.a.size(); ++i) s.a[i] = s.b[i] = c;
    if (c != 1.0) {
      s.a.back() = s.b.back() = c;
    }
    const RadialRhs m = reduced_rhs(s);
    for (std::size_t i = 0; i < m.da.size(); ++i) {
      CHECK(m.da[i] == 0.0);
      CHECK(m.db[i] == 0.0);
    }
  }
  const RadialRate z = reduced_rhs_point(5, 0.3, RadialData{});
  CHECK(z.da == 0.0);
  CHECK(z.db == 0.0);
}

TEST_CASE("reduced operator matches the full tensor operator") {
  const int n = 4;
  const Gaussian G{0.3, 0.2};
  const auto bg = tensor::make_background(tensor::constant_jet(tensor::identity(n), n));
  for (double r : {0.05, 0.4, 1.0, 2.2}) {
    const RadialData d = G.data(r);
    const RadialRate q = reduced_rhs_point(n, r, d);
    const tensor::Mat M = tensor::rdt_operator(cartesian_jet(n, r, d), bg);
    CHECK(q.da == doctest::Approx(M[0][0]).epsilon(1e-12));
    CHECK(q.db == doctest::Approx(M[1][1]).epsilon(1e-12));
    CHECK(std::abs(M[0][1]) < 1e-14);
  }
  // Origin limit of the jet and of the reduced operator.
  Gaussian iso{0.2, 0.0};
  RadialData d0 = iso.data(0);
  d0.b = d0.a;
  d0.b2 = 0.5 * d0.a2;
  const RadialRate q0 = reduced_rhs_point(n, 0, d0);
  const tensor::Mat M0 = tensor::rdt_operator(cartesian_jet(n, 0, d0), bg);
  CHECK(q0.da == doctest::Approx(M0[0][0]).epsilon(1e-13));
  CHECK(q0.db == doctest::Approx(M0[3][3]).epsilon(1e-13));
}

TEST_CASE("reduced operator against the Cartesian patch oracle") {
  const int n = 4;
  const Gaussian G{1e-3, 0.0};
  const double r0 = 1.0;
  const RadialRate exact = reduced_rhs_point(n, r0, G.data(r0));
  const auto metric = radial_metric_fn(n, [&](double r) { return G.a(r); }, [&](double r) { return G.b(r); });
  std::vector<double> hs{0.2, 0.1, 0.05}, errs;
  for (double h : hs) {
    grid::CartesianPatch P(n, tensor::Vec{r0, 0, 0, 0}, 4 * h, 9);
    const auto pm = tensor::PatchMetric::sample(P, metric, tensor::euclidean_metric(n));
    const auto M = tensor::ricci_deturck(pm);
    const tensor::Mat c = M.get(P.center_node());
    errs.push_back(std::max(std::abs(c[0][0] - exact.da), std::abs(c[1][1] - exact.db)));
  }
  CHECK(errs.back() < 1e-3 * std::max(std::abs(exact.da), std::abs(exact.db)));
  CHECK(slope(hs, errs) >= 1.9);
}

TEST_CASE("reduced operator converges under radial refinement") {
  const int n = 4;
  const Gaussian G{1e-2, 5e-3};
  std::vector<double> hs, errs;
  for (int k = 0; k < 3; ++k) {
    const int count = 64 * (1 << k) + 1;
    auto g = std::make_shared<const grid::RadialGrid>(n, count, 50.0);
    RadialFlowState s = RadialFlowState::flat(g);
    for (int i = 0; i + 1 < s.size(); ++i) {
      s.a[static_cast<std::size_t>(i)] = G.a(g->r(i));
      s.b[static_cast<std::size_t>(i)] = G.b(g->r(i));
    }
    const RadialRhs m = reduced_rhs(s);
    double e = 0;
    for (int i = 0; i < s.size() && g->r(i) < 4; ++i) {
      const RadialRate q = reduced_rhs_point(n, g->r(i), G.data(g->r(i)));
      e = std::max({e, std::abs(m.da[static_cast<std::size_t>(i)] - q.da), std::abs(m.db[static_cast<std::size_t>(i)] - q.db)});
    }
    hs.push_back(g->dxi());
    errs.push_back(e);
  }
  CHECK(slope(hs, errs) >= 1.9);
}

TEST_CASE("step: flat state, time order and validation") {
  auto g = std::make_shared<const grid::RadialGrid>(4, 96, 100.0);
  const RadialFlowState flat = RadialFlowState::flat(g);
  const double dt = max_stable_dt(flat, 0.2) * 0.5;
  const RadialFlowState s1 = step(flat, dt, 0.2);
  CHECK(s1.a == flat.a);
  CHECK(s1.b == flat.b);
  CHECK(s1.time == dt);
  CHECK_THROWS_AS(step(flat, 2 * max_stable_dt(flat, 0.2), 0.2), PreconditionError);

  FlowConfig c = short_config();
  c.eps = 1e-2;
  const RadialFlowState s0 = initial_state(c, make_grid(c));
  const double T = 0.02;
  const double dt0 = run_dt(c, s0);
  std::vector<RadialFlowState> finals;
  for (int k = 0; k < 3; ++k) {
    const double d = T / std::ceil(T / dt0) / (1 << k);
    RadialFlowState s = s0;
    const int steps = static_cast<int>(std::lround(T / d));
    for (int i = 0; i < steps; ++i) s = step(s, d, c.cfl);
    finals.push_back(s);
  }
  auto diff = [](const RadialFlowState& x, const RadialFlowState& y) {
    double m = 0;
    for (std::size_t i = 0; i < x.a.size(); ++i) m = std::max({m, std::abs(x.a[i] - y.a[i]), std::abs(x.b[i] - y.b[i])});
    return m;
  };
  const double ratio = diff(finals[0], finals[1]) / diff(finals[1], finals[2]);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);

  RadialFlowState bad = flat;
  bad.a[3] = std::nan("");
  CHECK_THROWS_AS(bad.validate(), FlowBreakdown);
  bad.a[3] = -0.1;
  CHECK_THROWS_AS(bad.validate(), FlowBreakdown);
  bad.a[3] = 1.0;
  bad.a[0] = 1.1;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
}

TEST_CASE("flow config parsing and validation") {
  FlowConfig c = short_config();
  c.shape = "traceless";
  c.seed = 42;
  const FlowConfig back = FlowConfig::parse(c.to_text());
  CHECK(back.to_text() == c.to_text());
  CHECK(back.to_json() == c.to_json());
  CHECK(FlowConfig::parse("n = 5\nell = 2.5\nell_prime = 1\n").n == 5);
  CHECK_THROWS_AS(FlowConfig::parse("colour = blue\n"), PreconditionError);
  CHECK_THROWS_AS(FlowConfig::parse("ell = 2.5\n"), PreconditionError);  // ℓ < n − 2 fails for n = 4
  CHECK_THROWS_AS(FlowConfig::parse("ell_prime = 0.2\n"), PreconditionError);
  CHECK_THROWS_AS(FlowConfig::parse("eps = abc\n"), PreconditionError);
  CHECK_THROWS_AS(FlowConfig::parse("T = 100\nr_max = 50\n"), PreconditionError);
  CHECK_THROWS_AS(FlowConfig::parse("shape = spiral\n"), PreconditionError);
}

TEST_CASE("initial shapes are normalised and regular") {
  for (const char* shape : {"pure_trace", "traceless", "bump"}) {
    FlowConfig c = short_config();
    c.shape = shape;
    const RadialFlowState s = initial_state(c, make_grid(c));
    CHECK(s.a[0] == s.b[0]);
    double w = 0;
    for (int i = 0; i < s.size(); ++i) {
      const auto u = static_cast<std::size_t>(i);
      w = std::max(w, std::pow(grid::rho(s.grid->r(i)), c.ell) * norm_h(c.n, s.a[u] - 1, s.b[u] - 1));
    }
    CHECK(w <= c.eps * (1 + 1e-6));
    CHECK(w >= c.eps * 0.9);
  }
  FlowConfig c = short_config();
  c.shape = "traceless";
  const RadialFlowState s = initial_state(c, make_grid(c));
  for (std::size_t i = 0; i < s.a.size(); ++i) CHECK(std::abs((s.a[i] - 1) + (c.n - 1) * (s.b[i] - 1)) < 1e-15);
}

TEST_CASE("run: flat, determinism and semigroup") {
  FlowConfig c = short_config();
  c.eps = 0;
  const Trajectory flat = run(c);
  CHECK(flat.completed);
  for (const auto& s : flat.states)
    for (std::size_t i = 0; i < s.a.size(); ++i) {
      CHECK(s.a[i] == 1.0);
      CHECK(s.b[i] == 1.0);
    }

  c.eps = 1e-3;
  const Trajectory a = run(c);
  FlowConfig c2 = c;
  c2.seed = 99;
  const Trajectory b = run(c2);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a.states[k].a == b.states[k].a);
    CHECK(a.states[k].b == b.states[k].b);
    CHECK(io::to_csv(diagnostics_columns(a)) == io::to_csv(diagnostics_columns(b)));
  }
  // Snapshots are log-spaced with the configured density and strictly increasing.
  CHECK(a.times.front() == 0.0);
  CHECK(a.times.back() == doctest::Approx(c.T).epsilon(1e-14));
  for (std::size_t k = 1; k < a.size(); ++k) CHECK(a.times[k] > a.times[k - 1]);
  CHECK(a.size() >= static_cast<std::size_t>(2 * c.snapshots_per_decade));

  const Trajectory first = run_from(c, a.states.front(), 0.4);
  const Trajectory second = run_from(c, first.states.back(), 0.6);
  const RadialFlowState& x = second.states.back();
  const RadialFlowState& y = a.states.back();
  CHECK(x.time == doctest::Approx(y.time).epsilon(1e-14));
  double d = 0;
  for (std::size_t i = 0; i < x.a.size(); ++i) d = std::max({d, std::abs(x.a[i] - y.a[i]), std::abs(x.b[i] - y.b[i])});
  CHECK(d <= 1e-8 * static_cast<double>(a.steps));
  CHECK(d <= 1e-9);

  const auto cols = trajectory_columns(a);
  CHECK(cols.size() == 5);
  CHECK(cols[0].values.size() == a.size() * static_cast<std::size_t>(a.grid().size()));
}

TEST_CASE("large data: breakdown is reported, never NaN") {
  FlowConfig c = short_config();
  c.eps = 0.5;
  c.nodes = 64;
  c.r_max = 20;
  const Trajectory tr = run(c);
  CHECK((tr.completed || !tr.breakdown.empty()));
  for (const auto& s : tr.states)
    for (std::size_t i = 0; i < s.a.size(); ++i) {
      CHECK(std::isfinite(s.a[i]));
      CHECK(std::isfinite(s.b[i]));
    }
}

TEST_CASE("decay fit on synthetic data is exact") {
  FlowConfig c;
  auto g = make_grid(c);
  Trajectory tr;
  tr.config = c;
  const double ell = 1.5, lp = 0.5, p = (ell - lp) / 2 + 1;
  for (int k = 0; k <= 32; ++k) {
    const double t = std::pow(10.0, k / 16.0);
    RadialFlowState s = RadialFlowState::flat(g);
    s.time = t;
    RadialRhs m;
    m.db.assign(s.a.size(), 0.0);
    for (int i = 0; i < g->size(); ++i) {
      const double rho = grid::rho(g->r(i));
      m.da.push_back(std::pow(rho, -lp) * std::pow(rho * rho + t, -p));
    }
    tr.times.push_back(t);
    tr.states.push_back(s);
    tr.rates.push_back(m);
  }
  const DecayFit f = fit_m_decay(tr, ell, lp);
  CHECK(f.temporal_exponent == doctest::Approx(p).epsilon(1e-3));
  CHECK(f.spatial_exponent == doctest::Approx(lp).epsilon(1e-3));
  CHECK(f.parabolic_exponent == doctest::Approx(p).epsilon(1e-3));
  CHECK(f.ell_prime_on_boundary);
  CHECK_THROWS_AS(fit_m_decay(tr, ell, lp, 2.0, 10.0), PreconditionError);
}

TEST_CASE("evolution inequalities and comparison on a short flow") {
  FlowConfig c = short_config();
  c.eps = 0;
  const Trajectory flat = run(c);
  const InequalityReport z = evolution_inequality_margin(flat, 2, 1.01);
  CHECK(z.max_h == 0.0);
  CHECK(z.max_m == 0.0);
  const barriers::BarrierSpec bs{3.5, 1.5, 3.95, 1e-2};
  const ComparisonReport cz = comparison_monitor(flat, bs, 1.0);
  CHECK(cz.status == ComparisonReport::Status::kClean);
  for (double m : cz.margins) CHECK(m > 0);

  c.eps = 1e-3;
  const Trajectory tr = run(c);
  for (double q : {2.0, 4.0}) {
    const InequalityReport rep = evolution_inequality_margin(tr, q, 1.01);
    CHECK(rep.applicable);
    CHECK(rep.passed());
    CHECK(rep.max_h_relative <= 1e-10);
    CHECK(rep.max_m_relative <= 1e-10);
    CHECK(rep.snapshots.size() == tr.size());
  }
  const InequalityReport tight = evolution_inequality_margin(tr, 2, 1.00001);
  CHECK_FALSE(tight.applicable);

  const double A = calibrate_comparison_amplitude(tr, bs, 2, 2.0);
  const ComparisonReport ok = comparison_monitor(tr, bs, A);
  CHECK(ok.status == ComparisonReport::Status::kClean);
  const ComparisonReport low = comparison_monitor(tr, bs, A / 4);
  CHECK(low.status == ComparisonReport::Status::kPreconditionFailure);
  CHECK(low.violation_t == 0.0);
}
