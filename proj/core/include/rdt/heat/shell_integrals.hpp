#pragma once

#include <functional>

namespace rdt::heat {

using RadialFn = std::function<double(double)>;

// Integrals over ℝⁿ of g(|z − c|)·w(|z|) with |c| = rc, reduced to two
// dimensions (a radius and the angle to c).
//   g_width   length scale on which g varies (e.g. √t for a heat kernel)
//   g_reach   g is negligible beyond this distance
//   w_width   length scale of w; 0 when w is slowly varying
struct ShellIntegrand {
  RadialFn g, w;
  double g_width = 1, g_reach = 10, w_width = 0;
};

// Panels stop refining at rel_tol of the piece estimate or at abs_tol of the
// full integral, whichever is larger.
struct ShellOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0;
  int max_depth = 12;
};

// Over the ball |z| ≤ R, in polar coordinates about the origin.
double ball_integral(int n, double rc, double R, const ShellIntegrand& f, const ShellOptions& o = {});
// Over |z| ≥ R, in polar coordinates about c; R = 0 gives all of ℝⁿ.
double exterior_integral(int n, double rc, double R, const ShellIntegrand& f, const ShellOptions& o = {});
// Radial function integrated over ℝⁿ: |S^{n−1}| ∫ f(r) r^{n−1} dr on [lo, hi].
double radial_integral(int n, const RadialFn& f, double lo, double hi, const ShellOptions& o = {});

// Distance s at which s^{2k} e^{−a s²/4t} has fallen below e^{−80} of its
// value at the Gaussian scale.
double gaussian_reach(double t, double a = 1, double k = 0);

}  // namespace rdt::heat
