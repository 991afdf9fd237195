#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace rdt::ortho {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A smooth map M: ℝᵐ → ℝᵏ with M(u₀) = 0.
struct ToyMap {
  std::string name;
  int m = 0, k = 0;
  std::function<Vector(const Vector&)> eval;
  std::function<Matrix(const Vector&)> jacobian;
  Vector u0;
  double radius = 0.5;     // sampling and probing stay inside B_radius(u₀)
  bool integrable = true;  // documented answer for the library
  std::string zero_set;

  // M(u₀) ≈ 0 and the Jacobian agrees with central differences at 20 points.
  void validate(std::uint64_t seed = 0) const;
};

inline constexpr const char* kLibraryVersion = "1";
// Six integrable maps followed by four non-integrable ones.
std::vector<ToyMap> map_library();
const ToyMap& library_map(const std::string& name);

// M(u) = −A u.
ToyMap linear_map(const Matrix& A, std::string name = "linear");
// M = −∇¼(|u|² − 1)² on ℝ², based at (1, 0).
ToyMap circle_potential();

// V₀ = ker L, V₁ = V₀^⊥, W₁ = Im L, W₀ = W₁^⊥ for L = dM(u₀); columns are
// orthonormal bases.
struct Splitting {
  Matrix V0, V1, W0, W1;
  Vector singular_values;
  int rank = 0;
  double threshold = 0;         // 10⁻⁸ σ_max
  bool ill_conditioned = false;  // a singular value within 10× of the threshold

  Matrix pi_V0() const { return V0 * V0.transpose(); }
  Matrix pi_V1() const { return V1 * V1.transpose(); }
  Matrix pi_W0() const { return W0 * W0.transpose(); }
  Matrix pi_W1() const { return W1 * W1.transpose(); }
  nlohmann::json to_json() const;
};
Splitting split(const ToyMap& map);
Splitting split(const Matrix& L);

// |π_{W₀} M(u)| / |M(u)|; empty when M(u) = 0.
std::optional<double> m0_ratio(const ToyMap& map, const Splitting& s, const Vector& u);

enum class Verdict { kIntegrable, kNonIntegrable, kInconclusive };
std::string to_string(Verdict v);

struct OrthoReport {
  std::string map;
  std::vector<double> radii;  // decreasing
  std::vector<double> sup_ratio;
  std::vector<int> used;      // samples kept after excluding the zero set
  double slope = 0;           // of log sup_ratio against log δ
  double min_sup = 0;
  Verdict verdict = Verdict::kInconclusive;
  nlohmann::json to_json() const;
};
struct ProbeOptions {
  int samples = 4000;  // per radius, half on the sphere and half inside
  std::uint64_t seed = 0;
};
// Integrable when the suprema decrease with slope ≥ 0.8, non-integrable when
// every supremum is at least ½.  Throws NumericalError when too few samples
// stay off the zero set.
OrthoReport integrability_probe(const ToyMap& map, const Splitting& s, const std::vector<double>& radii,
                                const ProbeOptions& o = {});

}  // namespace rdt::ortho
