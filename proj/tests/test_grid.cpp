#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "rdt/common.hpp"
#include "rdt/grid/laplacian_difference.hpp"
#include "rdt/grid/quadrature.hpp"
#include "rdt/grid/weighted_norms.hpp"
#include "rdt/io.hpp"
#include "rdt/tensor/metrics.hpp"

using namespace rdt;
using namespace rdt::grid;

TEST_CASE("rho") {
  CHECK(rho(0.0) == 1.0);
  CHECK(rho(std::sqrt(3.0)) == doctest::Approx(2.0).epsilon(1e-15));
  const double q = rho(1e6) / 1e6;
  CHECK(q > 1.0);
  CHECK(q < 1.0 + 1e-11);
  for (double d : {1e3, 1e4, 1e7}) CHECK(std::abs(rho(d) / d - 1.0) < 1e-5);
  tensor::Vec x{3.0, 4.0};
  CHECK(rho(x, 2) == doctest::Approx(std::sqrt(26.0)));
}

TEST_CASE("radial grid invariants and derivatives") {
  RadialGrid g(4, 2048, 1e4);
  CHECK(g.size() == 2048);
  CHECK(g.r(0) == 0.0);
  CHECK(g.r(2047) == 1e4);
  for (int i = 1; i < g.size(); ++i) CHECK_UNARY(g.r(i) > g.r(i - 1));
  CHECK_THROWS_AS(RadialGrid(4, 32, 10.0), PreconditionError);
  CHECK_THROWS_AS(RadialGrid(2, 128, 10.0), PreconditionError);
  CHECK_THROWS_AS(RadialGrid(4, 128, 10.0, 2.0), PreconditionError);

  // Derivatives of an even profile converge at fourth order in the interior.
  auto err = [](int count) {
    RadialGrid g(4, count, 20.0);
    std::vector<double> f;
    for (double r : g.nodes()) f.push_back(std::exp(-r * r / 4));
    std::vector<double> d1, d2;
    g.derivatives(f, d1, d2);
    double e = 0;
    for (int i = 0; i < g.size(); ++i) {
      const double r = g.r(i);
      if (r > 10) break;
      const double ex1 = -r / 2 * std::exp(-r * r / 4), ex2 = (r * r / 4 - 0.5) * std::exp(-r * r / 4);
      e = std::max({e, std::abs(d1[static_cast<std::size_t>(i)] - ex1), std::abs(d2[static_cast<std::size_t>(i)] - ex2)});
    }
    return e;
  };
  const double e1 = err(200), e2 = err(399);
  CHECK(std::log2(e1 / e2) > 3.5);
}

TEST_CASE("quadrature") {
  auto q = integrate([](double x) { return std::exp(x); }, 0, 1);
  CHECK(std::abs(q.value - (std::exp(1.0) - 1)) < 1e-12);
  auto s = integrate_endpoint_singular([](double x) { return 1 / std::sqrt(x); }, 0, 1);
  CHECK(std::abs(s.value - 2) < 1e-10);
}

TEST_CASE("weighted Hölder norm: closed cases") {
  const int n = 4;
  SUBCASE("constant scalar") {
    auto f = scalar_field(n, [](const tensor::Vec&) { return -2.5; });
    auto h = weighted_holder_norm(f, {0.0, 0.5, 0}, {0, 50});
    CHECK(h.value == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(h.seminorm == 0.0);
  }
  SUBCASE("sup part of rho^-delta is 1") {
    for (double d : {0.5, 1.5, 3.0}) {
      auto f = radial_field(n, [d](double r) { return std::pow(rho(r), -d); });
      auto h = weighted_holder_norm(f, {d, 0.5, 0}, {1, 100});
      CHECK(h.sup_terms[0] == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("dense-sampling oracle within 2%") {
    auto f = radial_field(n, [](double r) { return std::pow(rho(r), -1.5); });
    HolderSampling base;
    HolderSampling dense = base;
    dense.directions *= 2;
    dense.lengths *= 2;
    dense.radial_centers *= 4;
    auto a = weighted_holder_norm(f, {1.5, 0.5, 0}, {1, 100}, base);
    auto b = weighted_holder_norm(f, {1.5, 0.5, 0}, {1, 100}, dense);
    CHECK(a.value <= b.value * (1 + 1e-12));
    CHECK(std::abs(a.value - b.value) / b.value < 0.02);
  }
}

TEST_CASE("weighted Hölder norm: homogeneity, subadditivity, monotonicity") {
  const int n = 3;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  HolderSampling s;
  s.radial_centers = 16;
  s.directions = 12;
  s.lengths = 8;
  for (int t = 0; t < 5; ++t) {
    const double c1 = u(rng), c2 = u(rng), e1 = 1 + std::abs(u(rng)), e2 = 1 + std::abs(u(rng));
    auto f = scalar_field(n, [=](const tensor::Vec& x) { return c1 * std::pow(rho(x, n), -e1) * (1 + 0.3 * x[0] / rho(x, n)); });
    auto g = scalar_field(n, [=](const tensor::Vec& x) { return c2 * std::pow(rho(x, n), -e2) * std::cos(x[1] / rho(x, n)); });
    for (int k : {0, 1}) {
      const WeightSpec w{1.0, 0.4, k};
      const Annulus reg{0, 30};
      const double nf = weighted_holder_norm(f, w, reg, s).value;
      const double ng = weighted_holder_norm(g, w, reg, s).value;
      const double c = -3.7;
      CHECK(weighted_holder_norm(scaled_field(f, c), w, reg, s).value == doctest::Approx(std::abs(c) * nf).epsilon(1e-12));
      CHECK(weighted_holder_norm(sum_field(f, g), w, reg, s).value <= (nf + ng) * (1 + 1e-12));
      CHECK(weighted_holder_norm(f, {0.5, 0.4, k}, reg, s).value <= nf * (1 + 1e-12));
    }
  }
  CHECK_THROWS_AS(weighted_holder_norm(scalar_field(n, [](const tensor::Vec&) { return NAN; }), {0, 0.5, 0}, {0, 1}),
                  NumericalError);
  CHECK_THROWS_AS(weighted_holder_norm(scalar_field(n, [](const tensor::Vec&) { return 1.0; }), {0, 0.5, 0}, {2, 1}),
                  PreconditionError);
  CHECK_THROWS_AS(validate(WeightSpec{0, 1.0, 0}), PreconditionError);
}

TEST_CASE("weighted L^p norm") {
  const int n = 4;
  RadialFunction zero{[](double) { return 0.0; }, 10};
  CHECK(weighted_lp_norm(zero, 2, 0, kInfinity, n).value == 0.0);

  // ρ^{−n} with p = 1 sits exactly on the divergence threshold.
  RadialFunction f{[](double r) { return std::pow(1 + r * r, -2.0); }, 4};
  CHECK(weighted_lp_norm(f, 1, 1, kInfinity, n).divergent);

  // p = 2: ∫₁^∞ (1+r²)^{−4} r³ dr = 1/24.
  auto l2 = weighted_lp_norm(f, 2, 1, kInfinity, n);
  CHECK_FALSE(l2.divergent);
  CHECK(std::abs(l2.value * l2.value - 2 * kPi * kPi / 24) < 1e-6);

  RadialFunction inv{[](double r) { return 1 / std::sqrt(1 + r * r); }, 1};
  CHECK(weighted_lp_norm(inv, 2, 0, kInfinity, n).divergent);

  auto sup = weighted_lp_norm(inv, kInfinity, 0, 100, n);
  CHECK(sup.value == doctest::Approx(1.0));

  // Profile path agrees with the function path.
  RadialGrid g(n, 2048, 1e4);
  ScalarProfile p;
  for (double r : g.nodes()) p.values.push_back(f.f(r));
  auto lp = weighted_lp_norm(g, p, 4, 2, 1, kInfinity);
  CHECK(std::abs(lp.value - l2.value) / l2.value < 1e-5);
}

TEST_CASE("interpolation inequality") {
  const int n = 3;
  HolderSampling s;
  s.radial_centers = 16;
  s.directions = 12;
  s.lengths = 8;
  auto inv = radial_field(n, [](double r) { return 1 / rho(r); });
  CHECK(interpolation_check(inv, inv, 0, 0, 1, 1, 0.5, {0, 50}, s).ratio <= 1 + 1e-9);
  auto c1 = scalar_field(n, [](const tensor::Vec&) { return 2.0; });
  auto c2 = scalar_field(n, [](const tensor::Vec&) { return -0.5; });
  CHECK(interpolation_check(c1, c2, 0, 0, 0, 0, 0.5, {0, 50}, s).ratio == doctest::Approx(1.0));
  auto zero = scalar_field(n, [](const tensor::Vec&) { return 0.0; });
  CHECK_THROWS_AS(interpolation_check(zero, c2, 0, 0, 0, 0, 0.5, {0, 50}, s), PreconditionError);
}

namespace {
tensor::Mat gaussian_tensor(const tensor::Vec& x) {
  const int n = 4;
  double s = 0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i];
  tensor::Mat m{};
  const double e = std::exp(-s / 16);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = e * (i == j ? 1.0 + 0.1 * i : 0.2 / (1 + i + j));
  return m;
}
const tensor::Vec kRay{1, 0.5, -0.25, 0.1};
}  // namespace

TEST_CASE("Laplacian difference: flat background and bounded ratio") {
  const int n = 4;
  RadialGrid g(n, 256, 100.0);
  auto flat = laplacian_difference_residual(tensor::euclidean_metric(n), 2, gaussian_tensor, g, kRay, 1, 20);
  for (double v : flat.residual) CHECK(v == 0.0);
  for (double tau : {2.0, 3.0}) {
    auto r = laplacian_difference_residual(tensor::ale_power_metric(n, tau), tau, gaussian_tensor, g, kRay, 1, 20);
    CHECK(r.max_ratio < 2.0);
    CHECK(r.ratio.back() < 1.0);
  }
}

// One constant fitted at τ = 2 is expected to cover τ = 3 as well.  For the
// model metric (1 + r^{−τ})δ the coefficients grow with τ and the τ = 3 ratio
// exceeds the τ = 2 fit, so this case is kept as a documented failure.
TEST_CASE("Laplacian difference: constant fitted at tau=2 covers tau=3" * doctest::should_fail()) {
  const int n = 4;
  RadialGrid g(n, 256, 100.0);
  auto r2 = laplacian_difference_residual(tensor::ale_power_metric(n, 2), 2, gaussian_tensor, g, kRay, 1, 20);
  auto r3 = laplacian_difference_residual(tensor::ale_power_metric(n, 3), 3, gaussian_tensor, g, kRay, 1, 20);
  MESSAGE("fitted C (tau=2) = " << r2.max_ratio << ", max ratio (tau=3) = " << r3.max_ratio);
  CHECK(r3.max_ratio <= r2.max_ratio);
}

TEST_CASE("CSV round trip is exact") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  io::Column a{"r", {}}, b{"value", {}};
  for (int i = 0; i < 200; ++i) {
    a.values.push_back(u(rng));
    b.values.push_back(std::exp(u(rng) / 10));
  }
  const auto path = std::filesystem::temp_directory_path() / "rdt_csv_roundtrip.csv";
  io::write_csv(path, {a, b});
  auto back = io::read_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].name == "r");
  CHECK(back[0].values == a.values);
  CHECK(back[1].values == b.values);
  std::filesystem::remove(path);
}
