#pragma once

#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdt/heat/kernel.hpp"
#include "rdt/heat/shell_integrals.hpp"
#include "rdt/record.hpp"

namespace rdt::heat {

// Exponents of the weighted kernel norms.  `a` is the L^a exponent of the
// kernel factor d^{2α} H / (t^α ρ^β); `b`, `c` are the Hölder/Young exponents
// of the convolution checks (0 means "derive from the clause").
struct EstimateParams {
  double a = 2, alpha = 0, beta = 0;
  double b = 0, c = 0;

  // a ≥ 1, α, β ≥ 0 and aβ < n.
  void validate(int n) const;
  // aβ within 10% of n, where the constant is expected to blow up.
  bool near_boundary(int n) const { return a * beta >= 0.9 * n; }
  nlohmann::json to_json() const;
};

// ‖d(x,·)^{2α} H(x,·,t) / (t^α ρ^β)‖_{L^a} for |x| = r_x, split at ρ(y) = ρ(x)/2.
struct WeightedNorm {
  double value = 0;
  double region_I = 0, region_II = 0;  // contributions to the a-th power
  double rhs = 0;                      // t^{−n(a−1)/2a} (ρ(x)² + t)^{−β/2}
  double ratio = 0;
  bool near_boundary = false;
  nlohmann::json to_json() const;
};
WeightedNorm weighted_kernel_lp_norm(const KernelSpec& spec, const EstimateParams& p, double r_x, double t);
// a^{−n/2a} (4πt)^{−n(a−1)/2a}, the α = β = 0 value.
double gaussian_lp_norm(int n, double a, double t);

// Log-spaced (t, ρ(x)) nodes.
struct NormSweep {
  double t_lo = 0.1, t_hi = 1e4;
  int nt = 9;
  double rho_lo = 1, rho_hi = 100;
  int nrho = 7;
  std::vector<double> t_nodes() const;
  std::vector<double> rho_nodes() const;
  NormSweep refined() const;  // every interval halved
  nlohmann::json to_json() const;
};
// C = max ratio over the sweep, recomputed on the refined sweep; passes when
// the two agree within a factor of 2.
CalibrationRecord calibrate_weighted_norm(const KernelSpec& spec, const EstimateParams& p, const NormSweep& sweep);

// Radial source f(|y|) with declared decay |f| ≲ ρ^{−decay}, optionally
// supported in |y| ≤ support.
struct RadialSource {
  RadialFn f;
  double decay = 0;
  double support = std::numeric_limits<double>::infinity();
  std::string label;
};
// ‖f‖_{L^b(B_R)}; throws PreconditionError when f is not in L^b.
double source_norm(int n, const RadialSource& f, double b, double R = std::numeric_limits<double>::infinity());

enum class Clause { kA, kB, kC };
std::string to_string(Clause c);

struct ConvolutionSample {
  double t = 0;
  double lhs = 0;    // the convolution norm (a, b) or pointwise value (a)
  double bound = 0;  // Hölder or Young bound with the computed kernel norms
  double margin = 0; // 1 − lhs / bound
  double scaled = 0; // lhs divided by the model right-hand side without its constant
};
struct ConvolutionReport {
  Clause clause = Clause::kA;
  EstimateParams params;
  double position = 0;  // |x| for clause a, R for b and c
  std::vector<ConvolutionSample> samples;
  double min_margin = 0;
  double C_calibrated = 0;          // max of `scaled`
  double sharp_min_margin = 0;      // clause c with the sharp Euclidean constant
  bool passed(double tol = 1e-9) const { return min_margin >= -tol; }
  CalibrationRecord to_record(const KernelSpec& spec) const;
};
// Clause a: |∫ d^{2α}H f / (t^α ρ^β)| at |x| = position, 1/a + 1/b = 1.
// Clause b: the same convolution in L^c(M ∖ B_R), 1/a + 1/b = 1 + 1/c, R = position.
// Clause c: ‖∫_{B_R} H f‖_{L^b} ≤ min{1, (R²/t)^{n(b−1)/2b}} ‖f‖_{L^b(B_R)}, R = position.
ConvolutionReport convolution_bound_check(const KernelSpec& spec, const EstimateParams& p, const RadialSource& f,
                                          Clause clause, double position, const std::vector<double>& t_values);

}  // namespace rdt::heat
