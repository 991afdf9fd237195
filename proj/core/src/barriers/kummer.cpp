#include "rdt/barriers/kummer.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

#include "rdt/common.hpp"
#include "rdt/grid/quadrature.hpp"

namespace rdt::barriers {

void validate(const KummerParams& p) { require(p.a > 0 && p.b > 0, "Kummer parameters must be positive"); }

namespace {

double gk(const grid::Integrand& f, double lo, double hi) {
  if (hi <= lo) return 0.0;
  return grid::integrate_relative(f, lo, hi, 1e-14, 12).value;
}

// Algebraic endpoint singularities are handled by the double-exponential rule.
template <class F>
double ts(F f, double lo, double hi) {
  if (hi <= lo) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> rule(12);
  // Mapped to [0, 1] so the rule's abscissa clustering is scale free.
  const double w = hi - lo;
  auto g = [&](double z) { return f(lo + w * z); };
  return w * rule.integrate(g, 0.0, 1.0, 1e-14);
}

}  // namespace

double chi_integral(double a, double b, double u) {
  require(a > 0 && b > 0, "Kummer parameters must be positive");
  require(u >= 0, "χ is defined for u ≥ 0");
  // Left half x ∈ [0, ½]: beyond x = 60/u the factor e^{−ux} is below e^{−60}
  // relative to the bulk.
  auto fl = [&](double x) { return std::pow(x, a - 1) * std::pow(1 - x, b - 1) * std::exp(-u * x); };
  const double end = u > 120 ? 60.0 / u : 0.5;
  const double x1 = u > 2 ? std::min(end, 1.0 / u) : end;
  double left = ts(fl, 0.0, x1);
  for (double lo = x1; lo < end;) {
    const double hi = std::min(end, 4 * lo);
    left += gk(fl, lo, hi);
    lo = hi;
  }
  // Right half in y = 1 − x; skipped when e^{−u/2} is negligible.
  if (-0.5 * u < std::log(left) - 40.0) return left;
  auto fr = [&](double y) { return std::pow(y, b - 1) * std::pow(1 - y, a - 1) * std::exp(-u * (1 - y)); };
  return left + ts(fr, 0.0, 0.5);
}

ChiValue kummer_chi(const KummerParams& p, double u) {
  validate(p);
  require(u >= 0, "χ is defined for u ≥ 0");
  return ChiValue{chi_integral(p.a, p.b, u), -chi_integral(p.a + 1, p.b, u), chi_integral(p.a + 2, p.b, u)};
}

double chi_ode_residual(const KummerParams& p, double u) {
  const ChiValue c = kummer_chi(p, u);
  return u * c.d2 + (p.a + p.b + u) * c.d1 + p.a * c.value;
}

double beta_function(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

ChiBounds calibrate_chi_bounds(const KummerParams& p, const std::vector<double>& us) {
  validate(p);
  ChiBounds cb;
  const double inf = std::numeric_limits<double>::infinity();
  cb.c_ratio = cb.c_d1 = cb.c_d2 = inf;
  cb.C_ratio = cb.C_d1 = cb.C_d2 = 0;
  const double chi0 = chi_integral(p.a, p.b, 0);
  double prev = inf, prev_d1 = -inf;
  for (double u : us) {
    const ChiValue c = kummer_chi(p, u);
    if (u > 0) {
      const double q = (chi0 / c.value - 1) / std::pow(u, p.a);
      cb.c_ratio = std::min(cb.c_ratio, q);
      cb.C_ratio = std::max(cb.C_ratio, q);
    }
    const double r1 = -(1 + u) * c.d1 / c.value, r2 = (1 + u * u) * c.d2 / c.value;
    cb.c_d1 = std::min(cb.c_d1, r1);
    cb.C_d1 = std::max(cb.C_d1, r1);
    cb.c_d2 = std::min(cb.c_d2, r2);
    cb.C_d2 = std::max(cb.C_d2, r2);
    if (!(c.value < prev || u == 0) || !(c.d1 < 0)) cb.decreasing = false;
    if (!(c.d2 > 0) || c.d1 < prev_d1) cb.convex = false;
    prev = c.value;
    prev_d1 = c.d1;
  }
  return cb;
}

}  // namespace rdt::barriers
