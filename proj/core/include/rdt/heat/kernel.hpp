#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdt/tensor/small.hpp"

namespace rdt::heat {

using tensor::Vec;

// Scalar heat kernel of ℝⁿ or of ℝⁿ/Γ with Γ cyclic of the given order.
// Γ acts freely on the sphere: by rotation of the complex pairs
// (x₁,x₂),(x₃,x₄),… for even n, and by −1 (order 2 only) for odd n.
struct KernelSpec {
  int n = 4;
  int order = 1;
  int truncation = 0;  // nearest images summed; 0 sums all of them

  void validate() const;
  int images() const { return truncation == 0 ? order : truncation; }
  nlohmann::json to_json() const;
};

// γᵏ y for k = 0,…,order−1.
std::vector<Vec> orbit(const KernelSpec& spec, const Vec& y);
// Quotient distance min_γ |x − γy|.
double distance(const KernelSpec& spec, const Vec& x, const Vec& y);

struct KernelValue {
  double value = 0;
  Vec gradient{};           // ∇ₓH
  double distance = 0;
  double truncation_bound = 0;  // upper bound on the omitted images
  // H and ∇ₓH divided by the Gaussian at the quotient distance; finite even
  // where H itself underflows.
  double image_sum = 1;
  Vec image_gradient{};
};
// (4πt)^{−n/2} Σ_γ e^{−|x−γy|²/4t}.  Throws NumericalError when the omitted
// images could exceed 10⁻¹² of the value.
KernelValue kernel(const KernelSpec& spec, const Vec& x, const Vec& y, double t);
// Flat Gaussian (4πt)^{−n/2} e^{−s²/4t} at distance s.
double gaussian(int n, double s, double t);

// ∫ H(x,·,t) dV over the quotient.
double kernel_mass(const KernelSpec& spec, const Vec& x, double t);
// |∫ H(x,z,s) H(z,y,t) dz − H(x,y,s+t)| / H(x,y,s+t) on ℝⁿ with |x − y| = dist.
double semigroup_defect(int n, double dist, double s, double t);

// u(x,t) = ∫ H(x,y,t) u₀(|y|) dy on ℝⁿ at |x| = r, and ∂t u.  `scale` is the
// length on which u₀ varies.
struct RadialHeat {
  double u = 0, u_t = 0;
};
RadialHeat heat_evolve_radial(int n, const std::function<double(double)>& u0, double r, double t, double scale = 1);

struct KernelSample {
  Vec x{}, y{};
  double t = 1;
};
// Deterministic pairs with |x − y| ∈ [0, d_max] and log-uniform t; the first
// few samples have x = y.
std::vector<KernelSample> make_samples(const KernelSpec& spec, int count, double d_max, double t_lo, double t_hi,
                                       std::uint64_t seed);

// H ≤ C e^{−c d²/t} / t^{n/2}.
struct LiYauReport {
  double C = 0, c = 0.25;      // constants checked
  double C_calibrated = 0;     // max of H t^{n/2} e^{c d²/t} over the samples
  double min_margin = 0;       // min of 1 − H / bound
  double worst_d = 0, worst_t = 0;
  int samples = 0;
  bool passed(double tol = 1e-12) const { return min_margin >= -tol; }
  nlohmann::json to_json() const;
};
// C = (4π)^{−n/2}|Γ| and c = 1/4 − slack.
LiYauReport liyau_check(const KernelSpec& spec, const std::vector<KernelSample>& samples, double slack = 0);

// |∇H| ≤ C (1/√t + d/t) H.
struct GradientReport {
  double C = 0.5;
  double max_ratio = 0;       // max of |∇H| / ((1/√t + d/t) H)
  double min_margin = 0;      // min of 1 − ratio / C
  double max_flat_defect = 0; // max | |∇H|/H − d/2t | · t, only meaningful on ℝⁿ
  int samples = 0;
  bool passed(double tol = 1e-12) const { return min_margin >= -tol; }
  nlohmann::json to_json() const;
};
GradientReport gradient_bound_check(const KernelSpec& spec, const std::vector<KernelSample>& samples, double C = 0.5);
// Smallest C for which the gradient bound holds on the samples.
double calibrate_gradient_constant(const KernelSpec& spec, const std::vector<KernelSample>& samples);

}  // namespace rdt::heat
