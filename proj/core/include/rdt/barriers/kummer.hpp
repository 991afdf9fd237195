#pragma once

#include <vector>

namespace rdt::barriers {

struct KummerParams {
  double a = 1;
  double b = 1;
};
void validate(const KummerParams& p);

struct ChiValue {
  double value = 0;
  double d1 = 0;  // χ′
  double d2 = 0;  // χ″
};

// χ_{a,b}(u) = ∫₀¹ x^{a−1}(1−x)^{b−1} e^{−ux} dx with χ′ = −χ_{a+1,b}, χ″ = χ_{a+2,b}.
ChiValue kummer_chi(const KummerParams& p, double u);
double chi_integral(double a, double b, double u);

// u χ″ + (a + b + u) χ′ + a χ.
double chi_ode_residual(const KummerParams& p, double u);

double beta_function(double a, double b);

// Witness constants for the χ bounds over a set of sample points u.
struct ChiBounds {
  double c_ratio = 0, C_ratio = 0;  // χ(0)/(1 + C u^a) ≤ χ ≤ χ(0)/(1 + c u^a)
  double c_d1 = 0, C_d1 = 0;        // c χ ≤ −(1+u) χ′ ≤ C χ
  double c_d2 = 0, C_d2 = 0;        // c χ ≤ (1+u²) χ″ ≤ C χ
  bool decreasing = true;
  bool convex = true;
};
ChiBounds calibrate_chi_bounds(const KummerParams& p, const std::vector<double>& u);

}  // namespace rdt::barriers
