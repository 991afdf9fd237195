#include "rdt/ortho/toy_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rdt/common.hpp"

namespace rdt::ortho {

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix mat(int rows, int cols, std::initializer_list<double> v) {
  Matrix out(rows, cols);
  auto it = v.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = *it++;
  return out;
}

ToyMap make(std::string name, int m, int k, bool integrable, std::string zero_set,
            std::function<Vector(const Vector&)> f, std::function<Matrix(const Vector&)> J) {
  ToyMap t;
  t.name = std::move(name);
  t.m = m;
  t.k = k;
  t.integrable = integrable;
  t.zero_set = std::move(zero_set);
  t.eval = std::move(f);
  t.jacobian = std::move(J);
  t.u0 = Vector::Zero(m);
  return t;
}

Vector random_direction(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> normal;
  Vector d(m);
  do {
    for (int i = 0; i < m; ++i) d(i) = normal(rng);
  } while (d.norm() < 1e-12);
  return d.normalized();
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

void ToyMap::validate(std::uint64_t seed) const {
  require(m >= 1 && k >= 1 && eval && jacobian, "map '" + name + "' is incomplete");
  require(u0.size() == m, "base point of '" + name + "' has the wrong size");
  require(eval(u0).size() == k, "map '" + name + "' returns the wrong size");
  require(eval(u0).norm() <= 1e-12, "map '" + name + "' does not vanish at its base point");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit;
  for (int p = 0; p < 20; ++p) {
    const Vector u = u0 + radius * unit(rng) * random_direction(rng, m);
    const Matrix J = jacobian(u);
    require(J.rows() == k && J.cols() == m, "Jacobian of '" + name + "' has the wrong shape");
    Matrix fd(k, m);
    const double h = 1e-5 * std::max(1.0, u.norm());
    for (int j = 0; j < m; ++j) {
      Vector up = u, dn = u;
      up(j) += h;
      dn(j) -= h;
      fd.col(j) = (eval(up) - eval(dn)) / (2 * h);
    }
    const double scale = std::max({J.norm(), fd.norm(), 1e-12});
    require((J - fd).norm() <= 1e-6 * scale, "Jacobian of '" + name + "' disagrees with finite differences");
  }
}

std::vector<ToyMap> map_library() {
  std::vector<ToyMap> lib;
  lib.push_back(make(
      "xy_y", 2, 2, true, "{y = 0}", [](const Vector& u) { return vec({u(0) * u(1), u(1)}); },
      [](const Vector& u) { return mat(2, 2, {u(1), u(0), 0, 1}); }));
  lib.push_back(make(
      "curved_graph", 2, 2, true, "{y = −x²}",
      [](const Vector& u) {
        const double z = u(1) + u(0) * u(0);
        return vec({u(0) * z, z});
      },
      [](const Vector& u) {
        const double x = u(0), z = u(1) + x * x;
        return mat(2, 2, {z + 2 * x * x, x, 2 * x, 1});
      }));
  lib.push_back(make(
      "sheet_r3", 3, 3, true, "{y = 0}, a plane",
      [](const Vector& u) { return vec({u(0) * u(2), u(1) * u(2), u(2) * (1 + u(0) * u(0))}); },
      [](const Vector& u) {
        const double a = u(0), b = u(1), y = u(2);
        return mat(3, 3, {y, 0, a, 0, y, b, 2 * a * y, 0, 1 + a * a});
      }));
  lib.push_back(make(
      "line_r3", 3, 3, true, "{y₁ = y₂ = 0}, a line",
      [](const Vector& u) { return vec({u(0) * u(1) + u(1) * u(2), u(1), u(2)}); },
      [](const Vector& u) { return mat(3, 3, {u(1), u(0) + u(2), u(1), 0, 1, 0, 0, 0, 1}); }));
  lib.push_back(circle_potential());
  lib.push_back(make(
      "graph_r4", 4, 3, true, "{y₁ = −x₁², y₂ = x₁x₂}, a surface",
      [](const Vector& u) {
        const double z1 = u(2) + u(0) * u(0), z2 = u(3) - u(0) * u(1);
        return vec({u(0) * z1 + u(1) * z2, z1, z2});
      },
      [](const Vector& u) {
        const double a = u(0), b = u(1), z1 = u(2) + a * a, z2 = u(3) - a * b;
        return mat(3, 4,
                   {z1 + 2 * a * a - b * b, z2 - a * b, a, b,  //
                    2 * a, 0, 1, 0,                              //
                    -b, -a, 0, 1});
      }));
  lib.push_back(make(
      "x2_y", 2, 2, false, "{0}", [](const Vector& u) { return vec({u(0) * u(0), u(1)}); },
      [](const Vector& u) { return mat(2, 2, {2 * u(0), 0, 0, 1}); }));
  lib.push_back(make(
      "x3_y", 2, 2, false, "{0}", [](const Vector& u) { return vec({u(0) * u(0) * u(0), u(1)}); },
      [](const Vector& u) { return mat(2, 2, {3 * u(0) * u(0), 0, 0, 1}); }));
  lib.push_back(make(
      "two_quadrics", 3, 3, false, "{0}",
      [](const Vector& u) { return vec({u(0) * u(1), u(0) * u(0) - u(1) * u(1), u(2)}); },
      [](const Vector& u) { return mat(3, 3, {u(1), u(0), 0, 2 * u(0), -2 * u(1), 0, 0, 0, 1}); }));
  lib.push_back(make(
      "crossing_lines", 3, 2, false, "{x = ±y, z = 0}, two crossing lines",
      [](const Vector& u) { return vec({u(0) * u(0) - u(1) * u(1), u(2)}); },
      [](const Vector& u) { return mat(2, 3, {2 * u(0), -2 * u(1), 0, 0, 0, 1}); }));
  return lib;
}

const ToyMap& library_map(const std::string& name) {
  static const std::vector<ToyMap> lib = map_library();
  for (const auto& t : lib)
    if (t.name == name) return t;
  throw PreconditionError("no library map named '" + name + "'");
}

ToyMap linear_map(const Matrix& A, std::string name) {
  require(A.rows() >= 1 && A.cols() >= 1, "empty matrix");
  return make(
      std::move(name), static_cast<int>(A.cols()), static_cast<int>(A.rows()), true, "ker A",
      [A](const Vector& u) -> Vector { return -A * u; }, [A](const Vector&) -> Matrix { return -A; });
}

ToyMap circle_potential() {
  ToyMap t = make(
      "circle_gradient", 2, 2, true, "the unit circle",
      [](const Vector& u) -> Vector { return -(u.squaredNorm() - 1) * u; },
      [](const Vector& u) -> Matrix {
        return -(2 * u * u.transpose() + (u.squaredNorm() - 1) * Matrix::Identity(2, 2));
      });
  t.u0 = vec({1, 0});
  return t;
}

nlohmann::json Splitting::to_json() const {
  return {{"rank", rank},
          {"nullity", V0.cols()},
          {"cokernel", W0.cols()},
          {"singular_values", std::vector<double>(singular_values.data(), singular_values.data() + singular_values.size())},
          {"threshold", threshold},
          {"ill_conditioned", ill_conditioned}};
}

Splitting split(const Matrix& L) {
  require(L.rows() >= 1 && L.cols() >= 1 && L.allFinite(), "linearization must be a finite nonempty matrix");
  Eigen::JacobiSVD<Matrix> svd(L, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Splitting s;
  s.singular_values = svd.singularValues();
  const double smax = s.singular_values.size() ? s.singular_values(0) : 0;
  s.threshold = 1e-8 * smax;
  for (Eigen::Index i = 0; i < s.singular_values.size(); ++i) {
    const double v = s.singular_values(i);
    if (v > s.threshold) ++s.rank;
    if (v > 0.1 * s.threshold && v < 10 * s.threshold) s.ill_conditioned = true;
  }
  const auto m = L.cols(), k = L.rows();
  s.V1 = svd.matrixV().leftCols(s.rank);
  s.V0 = svd.matrixV().rightCols(m - s.rank);
  s.W1 = svd.matrixU().leftCols(s.rank);
  s.W0 = svd.matrixU().rightCols(k - s.rank);
  return s;
}

Splitting split(const ToyMap& map) {
  require(map.eval && map.jacobian && map.u0.size() == map.m, "map is incomplete");
  require(map.eval(map.u0).norm() <= 1e-12, "map does not vanish at its base point");
  return split(map.jacobian(map.u0));
}

std::optional<double> m0_ratio(const ToyMap& map, const Splitting& s, const Vector& u) {
  const Vector Mu = map.eval(u);
  const double total = Mu.norm();
  if (total == 0) return std::nullopt;
  if (s.W0.cols() == 0) return 0.0;
  return std::min(1.0, (s.W0.transpose() * Mu).norm() / total);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kIntegrable:
      return "integrable-consistent";
    case Verdict::kNonIntegrable:
      return "non-integrable-consistent";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

nlohmann::json OrthoReport::to_json() const {
  return {{"map", map},   {"radii", radii},     {"sup_ratio", sup_ratio},          {"used", used},
          {"slope", std::isfinite(slope) ? nlohmann::json(slope) : nlohmann::json("inf")},
          {"min_sup", min_sup}, {"verdict", to_string(verdict)}};
}

OrthoReport integrability_probe(const ToyMap& map, const Splitting& s, const std::vector<double>& radii,
                                const ProbeOptions& o) {
  require(radii.size() >= 2, "need at least two radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > 0 && radii[i] <= map.radius, "radii must lie in (0, validity radius]");
    require(i == 0 || radii[i] < radii[i - 1], "radii must decrease");
  }
  require(o.samples >= 20, "need at least 20 samples per radius");
  require(s.W0.rows() == map.k, "splitting does not belong to this map");
  OrthoReport rep;
  rep.map = map.name;
  rep.radii = radii;
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit;

  for (double delta : radii) {
    std::vector<Vector> pts;
    for (int i = 0; i < o.samples; ++i) {
      const double r = i % 2 == 0 ? delta : delta * std::pow(unit(rng), 1.0 / map.m);
      pts.push_back(map.u0 + r * random_direction(rng, map.m));
    }
    double sup_M = 0;
    for (const auto& u : pts) sup_M = std::max(sup_M, map.eval(u).norm());
    const double floor = 1e-10 * sup_M;
    auto ratio = [&](const Vector& u) -> double {
      if (!(map.eval(u).norm() >= floor) || sup_M == 0) return -1;
      return m0_ratio(map, s, u).value_or(-1);
    };
    std::vector<std::pair<double, Vector>> scored;
    for (const auto& u : pts) {
      const double q = ratio(u);
      if (q >= 0) scored.emplace_back(q, u);
    }
    if (static_cast<int>(scored.size()) < o.samples / 10)
      throw NumericalError("sampling starved near the zero set of '" + map.name + "'");
    rep.used.push_back(static_cast<int>(scored.size()));
    // Refine the best samples by a shrinking random search inside the ball.
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    double best = scored.front().first;
    for (std::size_t j = 0; j < std::min<std::size_t>(8, scored.size()); ++j) {
      auto [q, u] = scored[j];
      for (int it = 0; it < 200; ++it) {
        const double step = delta * std::pow(0.5, it / 10.0);
        Vector v = u + step * random_direction(rng, map.m);
        const double d = (v - map.u0).norm();
        if (d > delta) v = map.u0 + (v - map.u0) * (delta / d);
        const double qv = ratio(v);
        if (qv > q) {
          q = qv;
          u = v;
        }
      }
      best = std::max(best, q);
    }
    rep.sup_ratio.push_back(best);
  }

  rep.min_sup = *std::min_element(rep.sup_ratio.begin(), rep.sup_ratio.end());
  const double max_sup = *std::max_element(rep.sup_ratio.begin(), rep.sup_ratio.end());
  bool decreasing = true;
  for (std::size_t i = 1; i < radii.size(); ++i) decreasing = decreasing && rep.sup_ratio[i] <= rep.sup_ratio[i - 1];
  if (max_sup == 0) {
    rep.slope = std::numeric_limits<double>::infinity();  // M₀ vanishes identically
  } else if (rep.min_sup > 0) {
    rep.slope = fit_slope(radii, rep.sup_ratio);
  } else {
    rep.slope = std::numeric_limits<double>::quiet_NaN();
    decreasing = false;
  }
  if (decreasing && rep.slope >= 0.8)
    rep.verdict = Verdict::kIntegrable;
  else if (rep.min_sup >= 0.5)
    rep.verdict = Verdict::kNonIntegrable;
  return rep;
}

}  // namespace rdt::ortho
