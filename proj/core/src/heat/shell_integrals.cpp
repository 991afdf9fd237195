#include "rdt/heat/shell_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rdt/common.hpp"
#include "rdt/grid/radial_grid.hpp"

namespace rdt::heat {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Panel {
  double a, b, value, error;
};

Panel panel(const RadialFn& f, double a, double b) {
  double err = 0;
  const double v = GK::integrate(f, a, b, 0, 0.0, &err);
  return {a, b, v, err * 0.5 * (b - a)};  // error is reported on the reference interval [−1, 1]
}

double adapt(const RadialFn& f, const Panel& p, double tol_per_length, int depth) {
  if (depth == 0 || p.error <= tol_per_length * (p.b - p.a) || !std::isfinite(p.error)) return p.value;
  const double m = 0.5 * (p.a + p.b);
  return adapt(f, panel(f, p.a, m), tol_per_length, depth - 1) + adapt(f, panel(f, m, p.b), tol_per_length, depth - 1);
}

double piecewise(const RadialFn& f, std::vector<double> pts, double lo, double hi, const ShellOptions& o) {
  if (!(hi > lo)) return 0;
  pts.push_back(lo);
  pts.push_back(hi);
  std::erase_if(pts, [&](double p) { return !(p >= lo && p <= hi); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // The first pass over all pieces sets the relative target.
  std::vector<Panel> first;
  double scale = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    first.push_back(panel(f, pts[i], pts[i + 1]));
    scale += std::abs(first.back().value);
  }
  const double tol = std::max(o.rel_tol * scale, o.abs_tol) / (hi - lo);
  double sum = 0;
  for (const Panel& p : first) sum += adapt(f, p, tol, o.max_depth);
  return sum;
}

// Points c ± w·2^k for k = 0..levels−1.
void add_scale(std::vector<double>& pts, double c, double w, int levels = 5) {
  if (!(w > 0) || !std::isfinite(w)) return;
  for (int k = 0; k < levels; ++k) {
    const double d = w * std::ldexp(1.0, k);
    pts.push_back(c - d);
    pts.push_back(c + d);
  }
}

void validate(int n, double rc, double R, const ShellIntegrand& f) {
  require(n >= 3 && n <= 5, "shell integrals need 3 ≤ n ≤ 5");
  require(rc >= 0 && R >= 0, "radii must be nonnegative");
  require(f.g && f.w, "integrand functions must be set");
  require(f.g_width > 0 && f.g_reach > 0, "kernel scales must be positive");
}

}  // namespace

double ball_integral(int n, double rc, double R, const ShellIntegrand& f, const ShellOptions& o) {
  validate(n, rc, R, f);
  if (R == 0) return 0;
  const double full = grid::sphere_area(n), ring = grid::sphere_area(n - 1);
  auto inner = [&](double r) -> double {
    if (r == 0 || rc == 0) return full * f.g(std::hypot(r, rc));
    if (std::abs(r - rc) >= f.g_reach) return 0;
    const double cmax = (r * r + rc * rc - f.g_reach * f.g_reach) / (2 * r * rc);
    const double th_hi = cmax <= -1 ? kPi : std::acos(std::min(1.0, cmax));
    std::vector<double> pts;
    add_scale(pts, 0, f.g_width / std::sqrt(r * rc), 6);
    auto h = [&](double th) {
      const double d2 = std::max(0.0, (r - rc) * (r - rc) + 2 * r * rc * (1 - std::cos(th)));
      return f.g(std::sqrt(d2)) * std::pow(std::sin(th), n - 2);
    };
    ShellOptions io = o;
    const double weight = std::abs(f.w(r)) * std::pow(r, n - 1) * ring * R;
    io.abs_tol = weight > 0 ? o.abs_tol / weight : 0;
    return ring * piecewise(h, pts, 0, th_hi, io);
  };
  std::vector<double> pts;
  add_scale(pts, rc, f.g_width);
  add_scale(pts, 0, f.w_width);
  const double lo = std::max(0.0, rc - f.g_reach), hi = std::min(R, rc + f.g_reach);
  return piecewise([&](double r) { return f.w(r) * std::pow(r, n - 1) * inner(r); }, pts, lo, hi, o);
}

double exterior_integral(int n, double rc, double R, const ShellIntegrand& f, const ShellOptions& o) {
  validate(n, rc, R, f);
  const double full = grid::sphere_area(n), ring = grid::sphere_area(n - 1);
  auto inner = [&](double s) -> double {
    if (s == 0) return rc >= R ? full * f.w(rc) : 0;
    if (rc == 0) return s >= R ? full * f.w(s) : 0;
    const double kappa = (R * R - rc * rc - s * s) / (2 * rc * s);
    if (kappa >= 1) return 0;
    const double th_hi = kappa <= -1 ? kPi : std::acos(kappa);
    std::vector<double> pts;
    if (f.w_width > 0) add_scale(pts, kPi, f.w_width / std::sqrt(rc * s), 6);
    auto h = [&](double th) {
      const double z2 = std::max(0.0, rc * rc + s * s + 2 * rc * s * std::cos(th));
      return f.w(std::sqrt(z2)) * std::pow(std::sin(th), n - 2);
    };
    ShellOptions io = o;
    const double weight = std::abs(f.g(s)) * std::pow(s, n - 1) * ring * f.g_reach;
    io.abs_tol = weight > 0 ? o.abs_tol / weight : 0;
    return ring * piecewise(h, pts, 0, th_hi, io);
  };
  std::vector<double> pts{std::abs(R - rc), R + rc};
  add_scale(pts, 0, f.g_width, 6);
  add_scale(pts, rc, f.w_width);
  return piecewise([&](double s) { return f.g(s) * std::pow(s, n - 1) * inner(s); }, pts, 0, f.g_reach, o);
}

double radial_integral(int n, const RadialFn& f, double lo, double hi, const ShellOptions& o) {
  require(n >= 1 && lo >= 0 && hi > lo, "bad radial integral");
  auto h = [&](double r) {
    const double v = f(r);
    return v == 0 ? 0.0 : v * std::pow(r, n - 1);
  };
  double sum = 0;
  const double split = std::isinf(hi) ? std::max(lo, 1.0) : hi;
  if (split > lo) {
    std::vector<double> pts;
    for (double p = std::max(lo, 1e-3); p < split; p *= 2) pts.push_back(p);
    sum += piecewise(h, pts, lo, split, o);
  }
  if (std::isinf(hi)) {
    boost::math::quadrature::exp_sinh<double> tail;
    sum += tail.integrate(h, split, std::numeric_limits<double>::infinity(), o.rel_tol);
  }
  return grid::sphere_area(n) * sum;
}

double gaussian_reach(double t, double a, double k) {
  require(t > 0 && a > 0 && k >= 0, "bad Gaussian reach parameters");
  double K = std::sqrt(320.0 / a);
  while (a * K * K / 4 - 2 * k * std::log(K) < 80) K *= 1.1;
  return K * std::sqrt(t);
}

}  // namespace rdt::heat
