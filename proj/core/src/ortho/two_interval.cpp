#include "rdt/ortho/two_interval.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rdt/common.hpp"

namespace rdt::ortho {

namespace {

constexpr int kSamplesPerUnit = 200;

struct Tally {
  double worst = 0;
  int trials = 0, vacuous = 0;
  void add(double sup1, double sup2, double scale) {
    ++trials;
    if (sup1 <= 1e-12 * scale) {
      ++vacuous;
      return;
    }
    worst = std::max(worst, sup2 / sup1);
  }
  void finish(TwoIntervalResult& r) const {
    r.trials = trials;
    r.vacuous = vacuous;
    r.worst_ratio = worst;
    r.normalized = worst / std::exp(-r.lambda);
    r.passed = r.breakdown.empty() && r.normalized <= 1 + 1e-12;
  }
};

Vector gaussian_vector(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> normal;
  Vector v(m);
  for (int i = 0; i < m; ++i) v(i) = normal(rng);
  return v;
}

}  // namespace

nlohmann::json TwoIntervalResult::to_json() const {
  return {{"lambda", lambda},         {"lambda1", lambda1}, {"worst_ratio", worst_ratio},
          {"normalized", normalized}, {"trials", trials},   {"vacuous", vacuous},
          {"passed", passed},         {"breakdown", breakdown}};
}

double first_positive_eigenvalue(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  const Vector mu = es.eigenvalues();
  const double tol = 1e-10 * std::max(mu.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (mu(i) > tol) return mu(i);
  return 0;
}

TwoIntervalResult two_interval_check(const Matrix& A, double lambda, const std::vector<Vector>& initial) {
  require(A.rows() == A.cols() && A.rows() >= 1, "generator must be square");
  const double norm = A.norm();
  require((A - A.transpose()).norm() <= 1e-12 * std::max(norm, 1.0), "generator must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  Vector mu = es.eigenvalues();
  const double tol = 1e-10 * std::max(mu.cwiseAbs().maxCoeff(), 1e-300);
  require(mu.minCoeff() >= -tol, "generator must be positive semidefinite");
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (mu(i) <= tol) mu(i) = 0;  // the kernel is inert
  TwoIntervalResult r;
  r.lambda = lambda;
  r.lambda1 = first_positive_eigenvalue(A);
  require(r.lambda1 > 0, "generator has no positive eigenvalue");
  require(lambda >= 0 && lambda < r.lambda1, "need 0 ≤ λ < λ₁");

  Tally tally;
  for (const Vector& u0 : initial) {
    require(u0.size() == A.rows(), "initial datum has the wrong size");
    const Vector c = es.eigenvectors().transpose() * u0;
    auto norm_Au = [&](double t) {
      double s = 0;
      for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const double v = mu(i) * std::exp(-mu(i) * t) * c(i);
        s += v * v;
      }
      return std::sqrt(s);
    };
    double sup1 = 0, sup2 = 0;
    for (int j = 0; j <= kSamplesPerUnit; ++j) {
      const double t = static_cast<double>(j) / kSamplesPerUnit;
      sup1 = std::max(sup1, norm_Au(t));
      sup2 = std::max(sup2, norm_Au(1 + t));
    }
    tally.add(sup1, sup2, std::max(norm, 1e-300) * u0.norm());
  }
  tally.finish(r);
  return r;
}

TwoIntervalResult two_interval_check(const Matrix& A, double lambda, int trials, std::uint64_t seed) {
  require(trials >= 1, "need at least one trial");
  std::mt19937_64 rng(seed);
  std::vector<Vector> init;
  for (int i = 0; i < trials; ++i) init.push_back(gaussian_vector(rng, static_cast<int>(A.rows())));
  return two_interval_check(A, lambda, init);
}

Matrix random_psd(int dim, int nullity, std::uint64_t seed) {
  require(dim >= 1 && nullity >= 0 && nullity < dim, "need 0 ≤ nullity < dim");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> spectrum(0.1, 5.0);
  Matrix G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = normal(rng);
  const Matrix Q = Eigen::HouseholderQR<Matrix>(G).householderQ();
  Vector d = Vector::Zero(dim);
  for (int i = nullity; i < dim; ++i) d(i) = spectrum(rng);
  const Matrix A = Q * d.asDiagonal() * Q.transpose();
  return 0.5 * (A + A.transpose());
}

TwoIntervalResult nonlinear_two_interval(const ToyMap& map, double lambda, const std::vector<Vector>& initial,
                                         const NonlinearOptions& o) {
  require(o.steps_per_unit >= 10, "need at least 10 steps per unit time");
  require(lambda >= 0, "λ must be nonnegative");
  TwoIntervalResult r;
  r.lambda = lambda;
  const double dt = 1.0 / o.steps_per_unit;
  Tally tally;
  for (const Vector& start : initial) {
    require(start.size() == map.m, "initial datum has the wrong size");
    Vector u = start;
    double sup1 = 0, sup2 = 0;
    for (int j = 0; j <= 2 * o.steps_per_unit; ++j) {
      const double M = map.eval(u).norm();
      if (!std::isfinite(M) || !u.allFinite() || (u - map.u0).norm() > 1e6) {
        r.breakdown = "integration left the domain at t = " + std::to_string(j * dt);
        break;
      }
      if (j <= o.steps_per_unit) sup1 = std::max(sup1, M);
      if (j >= o.steps_per_unit) sup2 = std::max(sup2, M);
      const Vector k1 = map.eval(u);
      const Vector k2 = map.eval(u + 0.5 * dt * k1);
      const Vector k3 = map.eval(u + 0.5 * dt * k2);
      const Vector k4 = map.eval(u + dt * k3);
      u += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    if (!r.breakdown.empty()) break;
    tally.add(sup1, sup2, 1e-2);
  }
  tally.finish(r);
  return r;
}

TwoIntervalResult nonlinear_two_interval(const ToyMap& map, double lambda, double delta, const NonlinearOptions& o) {
  require(delta > 0, "δ must be positive");
  require(o.directions >= 1, "need at least one direction");
  std::vector<Vector> dirs;
  for (int i = 0; i < map.m && static_cast<int>(dirs.size()) < o.directions; ++i) {
    dirs.push_back(Vector::Unit(map.m, i));
    if (static_cast<int>(dirs.size()) < o.directions) dirs.push_back(-Vector::Unit(map.m, i));
  }
  std::mt19937_64 rng(0);
  while (static_cast<int>(dirs.size()) < o.directions) dirs.push_back(gaussian_vector(rng, map.m).normalized());
  std::vector<Vector> init;
  for (const auto& d : dirs) {
    init.push_back(map.u0 + delta * d);
    init.push_back(map.u0 + 0.5 * delta * d);
  }
  return nonlinear_two_interval(map, lambda, init, o);
}

nlohmann::json DeltaCalibration::to_json() const {
  nlohmann::json res = nlohmann::json::array();
  for (const auto& r : results) res.push_back(r.to_json());
  return {{"lambda", lambda}, {"delta", delta}, {"deltas", deltas}, {"results", res}};
}

DeltaCalibration calibrate_delta(const ToyMap& map, double lambda, const std::vector<double>& deltas,
                                 const NonlinearOptions& o) {
  require(!deltas.empty() && std::is_sorted(deltas.begin(), deltas.end()), "δ scan must be increasing");
  DeltaCalibration c;
  c.lambda = lambda;
  c.deltas = deltas;
  bool ok = true;
  for (double d : deltas) {
    c.results.push_back(nonlinear_two_interval(map, lambda, d, o));
    ok = ok && c.results.back().passed;
    if (ok) c.delta = d;
  }
  return c;
}

}  // namespace rdt::ortho
