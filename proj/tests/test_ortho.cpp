#include <cmath>
#include <random>

#include "doctest.h"
#include "rdt/common.hpp"
#include "rdt/ortho/two_interval.hpp"

using namespace rdt;
using namespace rdt::ortho;

namespace {

Vector v2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

const std::vector<double> kRadii{1e-1, 1e-2, 1e-3};

}  // namespace

TEST_CASE("library maps are valid") {
  const auto lib = map_library();
  REQUIRE(lib.size() == 10);
  int integrable = 0;
  for (const auto& m : lib) {
    CHECK_NOTHROW(m.validate(3));
    integrable += m.integrable;
  }
  CHECK(integrable == 6);
  CHECK_THROWS_AS(library_map("nope"), PreconditionError);

  ToyMap bad = library_map("xy_y");
  bad.jacobian = [](const Vector&) { return Matrix::Identity(2, 2); };
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  ToyMap shifted = library_map("xy_y");
  shifted.u0 = v2(0, 1);
  CHECK_THROWS_AS(shifted.validate(), PreconditionError);
}

TEST_CASE("splittings") {
  for (const char* name : {"xy_y", "x2_y"}) {
    const auto s = split(library_map(name));
    REQUIRE(s.rank == 1);
    CHECK(std::abs(std::abs(s.V0(0, 0)) - 1) < 1e-12);
    CHECK(std::abs(std::abs(s.W1(1, 0)) - 1) < 1e-12);
  }

  Matrix L(3, 5);
  L << 1, 2, 0, -1, 3, 0, 1, 1, 1, 0, 1, 3, 1, 0, 3;  // third row is the sum of the first two
  const auto s = split(L);
  CHECK(s.rank == 2);
  CHECK(s.rank + s.V0.cols() == 5);
  CHECK((L * s.V0).norm() <= 1e-12);
  CHECK((s.V0.transpose() * s.V1).norm() <= 1e-12);
  CHECK((s.W0.transpose() * s.W1).norm() <= 1e-12);
  const Matrix p0 = s.pi_V0(), p1 = s.pi_V1();
  CHECK((p0 * p0 - p0).norm() <= 1e-12);
  CHECK((p0 * p1).norm() <= 1e-12);
  CHECK((s.pi_W0() * s.pi_W1()).norm() <= 1e-12);
  CHECK_FALSE(s.ill_conditioned);

  Matrix near(2, 2);
  near << 1, 0, 0, 2e-8;
  CHECK(split(near).ill_conditioned);
}

TEST_CASE("m0 ratio closed forms") {
  const auto& xy = library_map("xy_y");
  const auto s = split(xy);
  for (double x : {-0.3, 0.01, 0.2})
    CHECK(*m0_ratio(xy, s, v2(x, 0.05)) == doctest::Approx(std::abs(x) / std::sqrt(1 + x * x)).epsilon(1e-12));
  CHECK_FALSE(m0_ratio(xy, s, v2(0.1, 0)).has_value());

  const auto& x2 = library_map("x2_y");
  CHECK(*m0_ratio(x2, split(x2), v2(0.1, 0)) == doctest::Approx(1));
}

TEST_CASE("integrability probe verdicts") {
  for (const auto& m : map_library()) {
    const auto r = integrability_probe(m, split(m), kRadii);
    INFO(m.name);
    for (double q : r.sup_ratio) {
      CHECK(q >= 0);
      CHECK(q <= 1);
    }
    if (m.integrable) {
      CHECK(r.verdict == Verdict::kIntegrable);
      CHECK(r.slope >= 0.8);
      for (std::size_t i = 0; i < kRadii.size(); ++i) CHECK(r.sup_ratio[i] <= kRadii[i] * (1 + 1e-9));
    } else {
      CHECK(r.verdict == Verdict::kNonIntegrable);
      CHECK(r.min_sup >= 0.5);
    }
  }
}

TEST_CASE("linear surjective map has trivial cokernel") {
  Matrix A(2, 3);
  A << 1, 1, 0, 0, 1, -1;
  const auto m = linear_map(A);
  const auto s = split(m);
  CHECK(s.W0.cols() == 0);
  const auto r = integrability_probe(m, s, kRadii);
  for (double q : r.sup_ratio) CHECK(q == 0);
  CHECK(r.verdict == Verdict::kIntegrable);
}

TEST_CASE("probe preconditions") {
  const auto& m = library_map("xy_y");
  const auto s = split(m);
  CHECK_THROWS_AS(integrability_probe(m, s, {1e-2, 1e-1}), PreconditionError);
  CHECK_THROWS_AS(integrability_probe(m, s, {2.0, 1e-1}), PreconditionError);
  ToyMap flat = linear_map(Matrix::Zero(2, 2), "zero");
  CHECK_THROWS_AS(integrability_probe(flat, split(flat), kRadii), NumericalError);
}

TEST_CASE("linear two-interval check") {
  const Matrix A = random_psd(6, 2, 42);
  const double l1 = first_positive_eigenvalue(A);
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);

  const Vector mode = es.eigenvectors().col(2);  // first positive mode
  const auto single = two_interval_check(A, 0.9 * l1, std::vector<Vector>{mode});
  CHECK(single.worst_ratio == doctest::Approx(std::exp(-l1)).epsilon(1e-10));
  CHECK(single.passed);

  const auto kern = two_interval_check(A, 0.9 * l1, std::vector<Vector>{es.eigenvectors().col(0)});
  CHECK(kern.vacuous == 1);
  CHECK(kern.passed);

  CHECK_THROWS_AS(two_interval_check(A, l1, 3, 0), PreconditionError);
  Matrix asym = A;
  asym(0, 1) += 1;
  CHECK_THROWS_AS(two_interval_check(asym, 0.1, 3, 0), PreconditionError);
  CHECK_THROWS_AS(two_interval_check(-A, 0.1, 3, 0), PreconditionError);

  int passed = 0;
  for (int i = 0; i < 100; ++i) {
    const int dim = 2 + i % 19;
    const Matrix B = random_psd(dim, std::min(i % 3, dim - 1), 1000 + static_cast<std::uint64_t>(i));
    passed += two_interval_check(B, 0.9 * first_positive_eigenvalue(B), 10, static_cast<std::uint64_t>(i)).passed;
  }
  CHECK(passed == 100);
}

TEST_CASE("nonlinear two-interval on the circle potential") {
  const auto c = circle_potential();
  CHECK_NOTHROW(c.validate());
  const double lambda = 0.9 * 2;  // second Hessian eigenvalue of the potential at (1, 0)
  CHECK(nonlinear_two_interval(c, lambda, 1e-2).passed);
  const auto far = nonlinear_two_interval(c, lambda, 0.5);
  CHECK_FALSE(far.passed);
  CHECK(far.breakdown.empty());

  const auto cal = calibrate_delta(c, lambda, {1e-3, 1e-2, 3e-2, 5e-2, 0.1, 0.2});
  CHECK(cal.delta >= 3e-2);
  CHECK(cal.delta < 0.2);
  CHECK(nonlinear_two_interval(c, lambda, cal.delta).passed);
}

TEST_CASE("linear map gives the same verdict both ways") {
  const Matrix A = random_psd(4, 1, 9);
  const double l1 = first_positive_eigenvalue(A);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::vector<Vector> init;
  for (int i = 0; i < 5; ++i) {
    Vector u(4);
    for (int j = 0; j < 4; ++j) u(j) = normal(rng);
    init.push_back(u);
  }
  for (double lambda : {0.9 * l1, 0.999 * l1}) {
    const auto lin = two_interval_check(A, lambda, init);
    const auto ode = nonlinear_two_interval(linear_map(A), lambda, init);
    CHECK(lin.passed == ode.passed);
    CHECK(ode.worst_ratio == doctest::Approx(lin.worst_ratio).epsilon(1e-8));
  }
}
