#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "rdt/grid/radial_grid.hpp"
#include "rdt/tensor/small.hpp"

namespace rdt::grid {

// A tensor field on ℝⁿ given by its Cartesian components.
struct Field {
  int n_dim = 0;
  int components = 1;
  std::function<void(const Vec&, double*)> eval;
};

Field scalar_field(int n, std::function<double(const Vec&)> f);
Field radial_field(int n, std::function<double(double r)> f);
Field scaled_field(const Field& f, double c);
Field sum_field(const Field& f, const Field& g);
// ∇f by fourth-order central differences with step ∝ ρ(x).
Field gradient_field(const Field& f, double relative_step = 5e-3);
// Outer product f ⊗ g.
Field product_field(const Field& f, const Field& g);

struct WeightSpec {
  double delta = 0;
  double gamma = 0.5;
  int k = 0;
};
void validate(const WeightSpec& w);

struct Annulus {
  double r_inner = 0;
  double r_outer = 1;
};

struct HolderSampling {
  int radial_centers = 48;
  int rays = 8;
  int directions = 32;
  int lengths = 16;
  double min_length_fraction = 1e-3;
  std::uint64_t seed = 7;
};

struct HolderNorm {
  double value = 0;
  std::vector<double> sup_terms;  // sup ρ^{δ+i}|∇ⁱf|, i = 0..k
  double seminorm = 0;            // sup_x ρ^{δ+k+γ}[∇ᵏf]_{γ, B(x, ρ/2)}
};

HolderNorm weighted_holder_norm(const Field& f, const WeightSpec& spec, const Annulus& region,
                                const HolderSampling& sampling = {});

// Radial function with the decay exponent that bounds it beyond the
// integration region: |f(r)| ≤ |f(r_cut)| (r/r_cut)^{−decay}.
struct RadialFunction {
  std::function<double(double)> f;
  double decay = 0;
};

struct LpNorm {
  double value = 0;  // (bulk + tail)^{1/p}, or the sampled sup when p = ∞
  double bulk = 0;   // ∫ |f|^p dV over [r_lo, min(r_hi, r_cut)]
  double tail = 0;   // analytic bound beyond r_cut
  double quadrature_error = 0;
  bool divergent = false;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// L^p norm on the annulus r ∈ [r_lo, r_hi] of ℝⁿ/Γ.  For r_hi = ∞ the
// integral is cut at r_cut and closed by the decay tail.
LpNorm weighted_lp_norm(const RadialFunction& f, double p, double r_lo, double r_hi, int n, int gamma_order = 1,
                        double r_cut = 1e4);
// Profile version: interpolates on the grid and uses r_cut = grid.r_max().
LpNorm weighted_lp_norm(const RadialGrid& grid, const ScalarProfile& f, double decay, double p, double r_lo,
                        double r_hi);

struct InterpolationCheck {
  double ratio = 0;
  double numerator = 0;
  double norm_f = 0;
  double norm_g = 0;
};

// ‖∇ⁱf ∇ʲg‖_{C^{0,γ}_{−α−β−i−j}} / (‖f‖_{C^{i,γ}_{−α}} ‖g‖_{C^{j,γ}_{−β}}).
InterpolationCheck interpolation_check(const Field& f, const Field& g, int i, int j, double alpha, double beta,
                                       double gamma, const Annulus& region, const HolderSampling& sampling = {});

}  // namespace rdt::grid
