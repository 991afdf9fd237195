#include "rdt/tensor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rdt/common.hpp"

namespace rdt::tensor {

double smooth_bump(double s) {
  s = std::abs(s);
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

namespace {
double bump_derivative(double s) {
  if (s >= 1.0) return 0.0;
  const double d = 1.0 - s * s;
  return smooth_bump(s) * (-2.0 * s / (d * d));
}

double dist2(const Vec& x, const Vec& y, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return s;
}
}  // namespace

MetricFn euclidean_metric(int n) {
  return [n](const Vec&) { return identity(n); };
}

MetricFn scaled_metric(int n, double c) {
  return [n, c](const Vec&) {
    Mat m = identity(n);
    for (int i = 0; i < n; ++i) m[i][i] = c;
    return m;
  };
}

MetricFn conformal_gaussian(int n, double eps, const Vec& x0, double width) {
  return [=](const Vec& x) {
    const double f = 1.0 + eps * std::exp(-dist2(x, x0, n) / (width * width));
    Mat m{};
    for (int i = 0; i < n; ++i) m[i][i] = f;
    return m;
  };
}

MetricFn anisotropic_diagonal(int n, const Vec& eps, double width) {
  return [=](const Vec& x) {
    const double e = std::exp(-dist2(x, Vec{}, n) / (width * width));
    Mat m{};
    for (int i = 0; i < n; ++i) m[i][i] = 1.0 + eps[i] * e;
    return m;
  };
}

MetricFn sphere_metric(int n) {
  return [n](const Vec& x) {
    const double r2 = dist2(x, Vec{}, n);
    const double f = 4.0 / ((1.0 + r2) * (1.0 + r2));
    Mat m{};
    for (int i = 0; i < n; ++i) m[i][i] = f;
    return m;
  };
}

MetricFn ale_power_metric(int n, double tau) {
  return [n, tau](const Vec& x) {
    const double r = std::sqrt(dist2(x, Vec{}, n));
    const double f = 1.0 + std::pow(r, -tau);
    Mat m{};
    for (int i = 0; i < n; ++i) m[i][i] = f;
    return m;
  };
}

MetricFn bump_diffeomorphism_pullback(int n, double eta, const Vec& x0, double radius, const Vec& v) {
  return [=](const Vec& x) {
    const double d = std::sqrt(dist2(x, x0, n));
    Mat J = identity(n);  // J[i][k] = ∂_i φ^k
    if (d > 0 && d < radius) {
      const double dp = bump_derivative(d / radius);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) J[i][k] += eta * dp * (x[i] - x0[i]) / (radius * d) * v[k];
    }
    Mat g{};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int k = 0; k < n; ++k) s += J[i][k] * J[j][k];
        g[i][j] = s;
      }
    return g;
  };
}

RandomMetric::RandomMetric(int n, std::uint64_t seed, int modes, double max_coeff, double spread) : n_(n) {
  require(n >= 1 && n <= kMaxDim, "dimension out of range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int m = 0; m < modes; ++m) {
    Mode md;
    double fro = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double e = u(rng);
        md.e[i][j] = md.e[j][i] = e;
        fro += (i == j ? 1.0 : 2.0) * e * e;
      }
    fro = std::sqrt(fro);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) md.e[i][j] /= fro;
    for (int i = 0; i < n; ++i) md.center[i] = spread * u(rng);
    md.radius = 3.0 + 0.5 * u(rng);
    md.coeff = max_coeff * u(rng);
    modes_.push_back(md);
  }
}

Mat RandomMetric::perturbation(const Vec& x) const {
  Mat h{};
  for (const Mode& md : modes_) {
    const double w = md.coeff * smooth_bump(std::sqrt(dist2(x, md.center, n_)) / md.radius);
    if (w == 0.0) continue;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) h[i][j] += w * md.e[i][j];
  }
  return h;
}

Mat RandomMetric::operator()(const Vec& x) const {
  Mat g = perturbation(x);
  for (int i = 0; i < n_; ++i) g[i][i] += 1.0;
  return g;
}

MetricFn RandomMetric::fn() const {
  return [self = *this](const Vec& x) { return self(x); };
}

double RandomMetric::c2_norm(double extent, int samples_per_axis) const {
  const double step = 1e-3;
  double s0 = 0, s1 = 0, s2 = 0;
  std::array<int, kMaxDim> idx{};
  const int total = static_cast<int>(std::pow(samples_per_axis, n_));
  for (int t = 0; t < total; ++t) {
    int rem = t;
    Vec x{};
    for (int a = 0; a < n_; ++a) {
      idx[a] = rem % samples_per_axis;
      rem /= samples_per_axis;
      x[a] = -extent + 2.0 * extent * idx[a] / (samples_per_axis - 1);
    }
    const Mat h0 = perturbation(x);
    s0 = std::max(s0, std::sqrt(frob2(h0, n_)));
    double g1 = 0, g2 = 0;
    for (int a = 0; a < n_; ++a) {
      Vec xp = x, xm = x;
      xp[a] += step;
      xm[a] -= step;
      const Mat hp = perturbation(xp), hm = perturbation(xm);
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          const double d1 = (hp[i][j] - hm[i][j]) / (2 * step);
          const double d2 = (hp[i][j] - 2 * h0[i][j] + hm[i][j]) / (step * step);
          g1 += d1 * d1;
          g2 += d2 * d2;
        }
      for (int b = a + 1; b < n_; ++b) {
        Vec pp = x, pm = x, mp = x, mm = x;
        pp[a] += step; pp[b] += step;
        pm[a] += step; pm[b] -= step;
        mp[a] -= step; mp[b] += step;
        mm[a] -= step; mm[b] -= step;
        const Mat A = perturbation(pp), B = perturbation(pm), C = perturbation(mp), D = perturbation(mm);
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j) {
            const double d = (A[i][j] - B[i][j] - C[i][j] + D[i][j]) / (4 * step * step);
            g2 += 2 * d * d;
          }
      }
    }
    s1 = std::max(s1, std::sqrt(g1));
    s2 = std::max(s2, std::sqrt(g2));
  }
  return s0 + s1 + s2;
}

void RandomMetric::cap_c2_norm(double bound, double extent) {
  const double c2 = c2_norm(extent);
  if (c2 <= bound) return;
  const double scale = bound / c2 * 0.999;
  for (Mode& md : modes_) md.coeff *= scale;
}

}  // namespace rdt::tensor
