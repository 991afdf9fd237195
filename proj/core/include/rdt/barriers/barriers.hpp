#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdt/barriers/kummer.hpp"
#include "rdt/record.hpp"

namespace rdt::barriers {

// Value and derivatives of a radial function of (r, t).  dr_over_r carries
// the r → 0 limit of ∂r f / r for even functions.
struct RadialJet {
  double v = 0;
  double dr = 0;
  double drr = 0;
  double dt = 0;
  double dr_over_r = 0;
};

// Δ_μ = ∂r² + ((μ−1)/r) ∂r.
struct RadialOperator {
  double mu = 1;
};
double delta_mu_apply(const RadialOperator& op, const RadialJet& f);
// Fourth-order FD fallback; at r = 0 the function must be declared even.
double delta_mu_apply(const RadialOperator& op, const std::function<double(double)>& f, double r, double h,
                      bool even_at_origin);

struct BarrierSpec {
  double k = 2;
  double l = 1;
  double nu = 3;
  double eps = 1e-2;
};
void validate_F(const BarrierSpec& s);
void validate_G(const BarrierSpec& s);

// F = χ_{k/2,(ν−k)/2}(r²/4t) / (2^k Γ(k/2) t^{k/2}).
RadialJet barrier_F(const BarrierSpec& s, double r, double t);
// G = ε² / ((r²+1)^{ℓ/2} (r²+t+1)^{(k−ℓ)/2}) + F(r, t+1).
RadialJet barrier_G(const BarrierSpec& s, double r, double t);
// The explicit first term of G.
double barrier_G_lower(const BarrierSpec& s, double r, double t);

// r nodes: 0 followed by log-spaced values; t nodes log-spaced.
struct VerificationGrid {
  double r_lo = 1e-3, r_hi = 1e3;
  double t_lo = 1e-2, t_hi = 1e6;
  int nr = 200, nt = 200;
  bool include_origin = true;
  std::vector<double> r_nodes() const;
  std::vector<double> t_nodes() const;
  nlohmann::json to_json() const;
};

using rdt::CalibrationRecord;

// c ≤ F·(r²+t)^{k/2} ≤ C over the grid.
CalibrationRecord calibrate_F_sandwich(const BarrierSpec& s, const VerificationGrid& g);
// c·rG/(r²+1) ≤ −∂r G ≤ C·rG/(r²+1) over the grid (r > 0).
CalibrationRecord calibrate_G_derivative(const BarrierSpec& s, const VerificationGrid& g);
// Largest c (by bisection) with (∂t − Δ_μ)F ≥ c·F/(r²+t) on the grid.
CalibrationRecord supersolution_margin_F(const BarrierSpec& s, double mu, const VerificationGrid& g);
// Largest c (by bisection) with (∂t − Δ_μ − c ε²/(r²+1)) G > 0 on the grid.
CalibrationRecord supersolution_margin_G(const BarrierSpec& s, double mu, const VerificationGrid& g);
// Largest ε in [eps_lo, eps_hi] for which the c = 0 margin of G stays positive.
double largest_admissible_eps(BarrierSpec s, double mu, const VerificationGrid& g, double eps_lo, double eps_hi);
// u = 0 followed by log-spaced samples in [1e-3, u_max].
std::vector<double> chi_sample_grid(double u_max, int count);
// Constants of the χ bounds as a record.
CalibrationRecord calibrate_chi(const KummerParams& p, const std::vector<double>& u);

// Re-evaluates a record and reports whether the stored constants still hold.
bool reverify(const CalibrationRecord& rec);

}  // namespace rdt::barriers
