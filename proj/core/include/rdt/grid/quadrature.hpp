#pragma once

#include <functional>

namespace rdt::grid {

using Integrand = std::function<double(double)>;

struct QuadResult {
  double value = 0;
  double error = 0;
};

// Adaptive 31-point Gauss-Kronrod with an absolute error target.
QuadResult integrate(const Integrand& f, double a, double b, double abs_tol = 1e-10, int max_depth = 30);

// Absolute target rel_tol·|one-panel estimate|.
QuadResult integrate_relative(const Integrand& f, double a, double b, double rel_tol = 1e-14, int max_depth = 30);

// Same as integrate on [a, b] with a > 0 after the substitution r = e^s.
QuadResult integrate_log(const Integrand& f, double a, double b, double abs_tol = 1e-10);

// Double-exponential rule for integrable endpoint singularities on [a, b].
QuadResult integrate_endpoint_singular(const Integrand& f, double a, double b, double tol = 1e-13);

}  // namespace rdt::grid
