#include "rdt/grid/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "rdt/common.hpp"

namespace rdt::grid {

namespace {

// One 31-point Kronrod panel with the embedded 15-point Gauss rule; the error
// estimate is |K − G| without a floor.
double panel(const Integrand& f, double a, double b, double& err) {
  const auto& x = boost::math::quadrature::gauss_kronrod<double, 31>::abscissa();
  const auto& wk = boost::math::quadrature::gauss_kronrod<double, 31>::weights();
  const auto& wg = boost::math::quadrature::gauss<double, 15>::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double f0 = f(c);
  double K = wk[0] * f0, G = wg[0] * f0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double s = f(c - h * x[i]) + f(c + h * x[i]);
    K += wk[i] * s;
    if (i % 2 == 0) G += wg[i / 2] * s;
  }
  err = std::abs(K - G) * h;
  return K * h;
}

void adapt(const Integrand& f, double a, double b, double tol, int depth, QuadResult& acc) {
  double err = 0;
  const double v = panel(f, a, b, err);
  if (err <= tol || depth == 0 || b - a < 1e-14 * (std::abs(a) + std::abs(b))) {
    acc.value += v;
    acc.error += err;
    return;
  }
  const double m = 0.5 * (a + b);
  adapt(f, a, m, 0.5 * tol, depth - 1, acc);
  adapt(f, m, b, 0.5 * tol, depth - 1, acc);
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, double abs_tol, int max_depth) {
  QuadResult r;
  if (a == b) return r;
  require(a < b, "integration bounds out of order");
  adapt(f, a, b, abs_tol, max_depth, r);
  if (!std::isfinite(r.value)) throw NumericalError("integrand produced a non-finite value");
  return r;
}

QuadResult integrate_relative(const Integrand& f, double a, double b, double rel_tol, int max_depth) {
  if (a == b) return {};
  double err = 0;
  const double scale = std::abs(panel(f, a, b, err));
  return integrate(f, a, b, std::max(rel_tol * scale, 1e-300), max_depth);
}

QuadResult integrate_log(const Integrand& f, double a, double b, double abs_tol) {
  require(a > 0 && b >= a, "log-variable quadrature needs 0 < a ≤ b");
  auto g = [&f](double s) {
    const double r = std::exp(s);
    return f(r) * r;
  };
  return integrate(g, std::log(a), std::log(b), abs_tol);
}

QuadResult integrate_endpoint_singular(const Integrand& f, double a, double b, double tol) {
  boost::math::quadrature::tanh_sinh<double> ts(15);
  QuadResult r;
  r.value = ts.integrate(f, a, b, tol, &r.error);
  if (!std::isfinite(r.value)) throw NumericalError("integrand produced a non-finite value");
  return r;
}

}  // namespace rdt::grid
