#include "rdt/grid/weighted_norms.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "rdt/common.hpp"
#include "rdt/grid/quadrature.hpp"

namespace rdt::grid {

Field scalar_field(int n, std::function<double(const Vec&)> f) {
  return Field{n, 1, [f = std::move(f)](const Vec& x, double* out) { out[0] = f(x); }};
}

Field radial_field(int n, std::function<double(double)> f) {
  return Field{n, 1, [n, f = std::move(f)](const Vec& x, double* out) {
                 double s = 0;
                 for (int i = 0; i < n; ++i) s += x[i] * x[i];
                 out[0] = f(std::sqrt(s));
               }};
}

Field scaled_field(const Field& f, double c) {
  return Field{f.n_dim, f.components, [f, c](const Vec& x, double* out) {
                 f.eval(x, out);
                 for (int i = 0; i < f.components; ++i) out[i] *= c;
               }};
}

Field sum_field(const Field& f, const Field& g) {
  require(f.n_dim == g.n_dim && f.components == g.components, "fields have different shapes");
  return Field{f.n_dim, f.components, [f, g](const Vec& x, double* out) {
                 std::vector<double> tmp(static_cast<std::size_t>(g.components));
                 f.eval(x, out);
                 g.eval(x, tmp.data());
                 for (int i = 0; i < f.components; ++i) out[i] += tmp[static_cast<std::size_t>(i)];
               }};
}

Field gradient_field(const Field& f, double relative_step) {
  const int n = f.n_dim, c = f.components;
  return Field{n, n * c, [f, n, c, relative_step](const Vec& x, double* out) {
                 const double h = relative_step * rho(x, n);
                 std::vector<double> v(static_cast<std::size_t>(4 * c));
                 static constexpr double off[4] = {-2, -1, 1, 2};
                 static constexpr double w[4] = {1, -8, 8, -1};
                 for (int a = 0; a < n; ++a) {
                   for (int s = 0; s < 4; ++s) {
                     Vec y = x;
                     y[a] += off[s] * h;
                     f.eval(y, v.data() + s * c);
                   }
                   for (int k = 0; k < c; ++k) {
                     double d = 0;
                     for (int s = 0; s < 4; ++s) d += w[s] * v[static_cast<std::size_t>(s * c + k)];
                     out[k * n + a] = d / (12 * h);
                   }
                 }
               }};
}

Field product_field(const Field& f, const Field& g) {
  require(f.n_dim == g.n_dim, "fields live in different dimensions");
  return Field{f.n_dim, f.components * g.components, [f, g](const Vec& x, double* out) {
                 std::vector<double> a(static_cast<std::size_t>(f.components)), b(static_cast<std::size_t>(g.components));
                 f.eval(x, a.data());
                 g.eval(x, b.data());
                 for (std::size_t i = 0; i < a.size(); ++i)
                   for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
               }};
}

void validate(const WeightSpec& w) {
  require(w.gamma > 0 && w.gamma < 1, "Hölder exponent must lie in (0, 1)");
  require(w.k >= 0 && w.k <= 2, "derivative order must be 0, 1 or 2");
}

namespace {

double norm_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericalError("field produced a non-finite value");
    s += x * x;
  }
  return std::sqrt(s);
}

double diff_norm(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Vec normalized(Vec v, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += v[i] * v[i];
  s = std::sqrt(s);
  for (int i = 0; i < n; ++i) v[i] /= s;
  return v;
}

std::vector<Vec> unit_vectors(int n, int count, std::mt19937_64& rng, bool structured_first) {
  std::vector<Vec> out;
  std::normal_distribution<double> nd;
  if (structured_first) {
    for (int i = 0; i < n && static_cast<int>(out.size()) < count; ++i) {
      Vec e{};
      e[i] = 1;
      out.push_back(e);
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (double sg : {1.0, -1.0}) {
          if (static_cast<int>(out.size()) >= count) break;
          Vec e{};
          e[i] = 1;
          e[j] = sg;
          out.push_back(normalized(e, n));
        }
  }
  while (static_cast<int>(out.size()) < count) {
    Vec e{};
    for (int i = 0; i < n; ++i) e[i] = nd(rng);
    out.push_back(normalized(e, n));
  }
  return out;
}

std::vector<Vec> ray_set(int n, int count, std::mt19937_64& rng) {
  std::vector<Vec> out;
  Vec e1{};
  e1[0] = 1;
  out.push_back(e1);
  if (count > 1 && n > 1) {
    Vec d{};
    d[0] = d[1] = 1;
    out.push_back(normalized(d, n));
  }
  if (count > 2) {
    Vec d{};
    for (int i = 0; i < n; ++i) d[i] = 1;
    out.push_back(normalized(d, n));
  }
  std::normal_distribution<double> nd;
  while (static_cast<int>(out.size()) < count) {
    Vec e{};
    for (int i = 0; i < n; ++i) e[i] = nd(rng);
    out.push_back(normalized(e, n));
  }
  out.resize(static_cast<std::size_t>(std::max(count, 1)));
  return out;
}

std::vector<double> center_radii(const Annulus& region, int count) {
  std::vector<double> rs;
  if (region.r_inner == region.r_outer) return {region.r_inner};
  if (region.r_inner == 0.0) rs.push_back(0.0);
  const double lo = std::max(region.r_inner, std::min(1e-2, region.r_outer / 100));
  const int m = std::max(2, count - static_cast<int>(rs.size()));
  for (int i = 0; i < m; ++i) rs.push_back(lo * std::pow(region.r_outer / lo, static_cast<double>(i) / (m - 1)));
  return rs;
}

}  // namespace

HolderNorm weighted_holder_norm(const Field& f, const WeightSpec& spec, const Annulus& region,
                                const HolderSampling& sampling) {
  validate(spec);
  require(region.r_inner >= 0 && region.r_outer >= region.r_inner, "region is empty");
  require(sampling.lengths >= 2 && sampling.directions >= 1, "sampling too coarse");
  const int n = f.n_dim;
  std::vector<Field> D{f};
  for (int i = 1; i <= spec.k; ++i) D.push_back(gradient_field(D.back()));

  std::mt19937_64 rng(sampling.seed);
  const auto rays = ray_set(n, sampling.rays, rng);
  const auto dirs = unit_vectors(n, sampling.directions, rng, true);
  const auto radii = center_radii(region, sampling.radial_centers);

  HolderNorm out;
  out.sup_terms.assign(static_cast<std::size_t>(spec.k + 1), 0.0);
  const Field& top = D.back();
  std::vector<double> v0(static_cast<std::size_t>(top.components)), vp(v0.size()), vm(v0.size());
  for (double r : radii) {
    for (const Vec& ray : rays) {
      Vec x{};
      for (int a = 0; a < n; ++a) x[a] = r * ray[a];
      const double w = rho(x, n);
      for (int i = 0; i <= spec.k; ++i) {
        std::vector<double> v(static_cast<std::size_t>(D[static_cast<std::size_t>(i)].components));
        D[static_cast<std::size_t>(i)].eval(x, v.data());
        out.sup_terms[static_cast<std::size_t>(i)] =
            std::max(out.sup_terms[static_cast<std::size_t>(i)], std::pow(w, spec.delta + i) * norm_of(v));
      }
      top.eval(x, v0.data());
      double semi = 0;
      const double smax = 0.5 * w * (1 - 1e-9);
      for (const Vec& th : dirs) {
        for (int l = 0; l < sampling.lengths; ++l) {
          const double s =
              smax * std::pow(sampling.min_length_fraction, 1.0 - static_cast<double>(l) / (sampling.lengths - 1));
          Vec xp = x, xm = x;
          for (int a = 0; a < n; ++a) {
            xp[a] += s * th[a];
            xm[a] -= s * th[a];
          }
          top.eval(xp, vp.data());
          top.eval(xm, vm.data());
          norm_of(vp);
          norm_of(vm);
          const double sg = std::pow(s, spec.gamma);
          semi = std::max({semi, diff_norm(vp, v0) / sg, diff_norm(vm, v0) / sg,
                           diff_norm(vp, vm) / std::pow(2 * s, spec.gamma)});
        }
      }
      out.seminorm = std::max(out.seminorm, std::pow(w, spec.delta + spec.k + spec.gamma) * semi);
    }
  }
  out.value = out.seminorm;
  for (double t : out.sup_terms) out.value += t;
  return out;
}

LpNorm weighted_lp_norm(const RadialFunction& fn, double p, double r_lo, double r_hi, int n, int gamma_order,
                        double r_cut) {
  require(p >= 1, "p must lie in [1, ∞]");
  require(r_lo >= 0 && r_hi > r_lo, "region is empty");
  LpNorm out;
  const double top = std::min(r_hi, r_cut);
  if (std::isinf(p)) {
    const int m = 4096;
    double sup = 0;
    auto take = [&](double r) {
      const double v = fn.f(r);
      if (!std::isfinite(v)) throw NumericalError("field produced a non-finite value");
      sup = std::max(sup, std::abs(v));
    };
    if (r_lo < 1.0) {
      const double b = std::min(1.0, top);
      for (int i = 0; i < m; ++i) take(r_lo + (b - r_lo) * i / (m - 1));
    }
    if (top > 1.0) {
      const double a = std::max(1.0, r_lo);
      for (int i = 0; i < m; ++i) take(a * std::pow(top / a, static_cast<double>(i) / (m - 1)));
    }
    out.value = out.bulk = sup;
    return out;
  }
  if (std::isinf(r_hi) && fn.decay * p <= n) {
    out.divergent = true;
    out.value = kInfinity;
    return out;
  }
  const double shell = sphere_area(n) / gamma_order;
  auto integrand = [&](double r) { return std::pow(std::abs(fn.f(r)), p) * std::pow(r, n - 1); };
  if (r_lo < 1.0) {
    const auto q = integrate(integrand, r_lo, std::min(1.0, top));
    out.bulk += q.value;
    out.quadrature_error += q.error;
  }
  if (top > 1.0) {
    const auto q = integrate_log(integrand, std::max(1.0, r_lo), top);
    out.bulk += q.value;
    out.quadrature_error += q.error;
  }
  out.bulk *= shell;
  out.quadrature_error *= shell;
  if (std::isinf(r_hi))
    out.tail = shell * std::pow(std::abs(fn.f(r_cut)), p) * std::pow(r_cut, n) / (fn.decay * p - n);
  out.value = std::pow(out.bulk + out.tail, 1.0 / p);
  return out;
}

LpNorm weighted_lp_norm(const RadialGrid& grid, const ScalarProfile& f, double decay, double p, double r_lo,
                        double r_hi) {
  validate_profile(grid, f);
  auto interp = std::make_shared<ProfileInterpolant>(grid, f.values);
  RadialFunction rf{[interp](double r) { return (*interp)(r); }, decay};
  return weighted_lp_norm(rf, p, std::max(r_lo, grid.r_min()), r_hi, grid.dim(), grid.gamma_order(), grid.r_max());
}

InterpolationCheck interpolation_check(const Field& f, const Field& g, int i, int j, double alpha, double beta,
                                       double gamma, const Annulus& region, const HolderSampling& sampling) {
  Field fi = f, gj = g;
  for (int s = 0; s < i; ++s) fi = gradient_field(fi);
  for (int s = 0; s < j; ++s) gj = gradient_field(gj);
  InterpolationCheck out;
  out.numerator =
      weighted_holder_norm(product_field(fi, gj), WeightSpec{alpha + beta + i + j, gamma, 0}, region, sampling).value;
  out.norm_f = weighted_holder_norm(f, WeightSpec{alpha, gamma, i}, region, sampling).value;
  out.norm_g = weighted_holder_norm(g, WeightSpec{beta, gamma, j}, region, sampling).value;
  const double den = out.norm_f * out.norm_g;
  if (!(den > 0)) throw PreconditionError("interpolation ratio has a zero denominator");
  out.ratio = out.numerator / den;
  return out;
}

}  // namespace rdt::grid
