#pragma once

#include <cstdint>
#include <vector>

#include "rdt/tensor/patch_fields.hpp"

namespace rdt::tensor {

MetricFn euclidean_metric(int n);
MetricFn scaled_metric(int n, double c);
// (1 + ε φ(x)) δ with φ = exp(−|x − x0|²/w²).
MetricFn conformal_gaussian(int n, double eps, const Vec& x0, double width);
// diag(1 + ε_i exp(−|x|²/w²)).
MetricFn anisotropic_diagonal(int n, const Vec& eps, double width);
// 4/(1 + |x|²)² δ, the round sphere in stereographic coordinates.
MetricFn sphere_metric(int n);
// (1 + |x|^{−τ}) δ; an ALE model of order τ away from the origin.
MetricFn ale_power_metric(int n, double tau);
// Pull-back φ*δ with φ(x) = x + η ψ(|x − x0|/R) v, ψ a C∞ bump.
MetricFn bump_diffeomorphism_pullback(int n, double eta, const Vec& x0, double radius, const Vec& v);

// C∞ bump exp(1 − 1/(1 − s²)) on s < 1, equal to 1 at s = 0.
double smooth_bump(double s);

// g0 + Σ c_m E_m ψ(|x − x_m|/R_m) with seeded random modes.
class RandomMetric {
 public:
  struct Mode {
    Mat e{};
    Vec center{};
    double radius = 1.0;
    double coeff = 0.0;
  };

  // `spread` bounds the mode centres (cube of half-width spread around the origin).
  RandomMetric(int n, std::uint64_t seed, int modes = 6, double max_coeff = 0.05, double spread = 0.6);

  Mat operator()(const Vec& x) const;
  MetricFn fn() const;
  Mat perturbation(const Vec& x) const;
  // Derivative-sampled estimate of ‖g − g0‖_{C²} on the cube of half-width `extent`.
  double c2_norm(double extent, int samples_per_axis = 9) const;
  // Rescales the coefficients so the sampled C² norm does not exceed `bound`.
  void cap_c2_norm(double bound, double extent);

  const std::vector<Mode>& modes() const { return modes_; }

 private:
  int n_;
  std::vector<Mode> modes_;
};

}  // namespace rdt::tensor
