#include "rdt/heat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "rdt/common.hpp"
#include "rdt/heat/shell_integrals.hpp"

namespace rdt::heat {

namespace {

double norm(const Vec& v, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
  return std::sqrt(s);
}

Vec minus(const Vec& a, const Vec& b) {
  Vec r{};
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

}  // namespace

void KernelSpec::validate() const {
  require(n >= 3 && n <= tensor::kMaxDim, "kernel dimension out of range");
  require(order >= 1, "group order must be positive");
  require(n % 2 == 0 || order <= 2, "odd dimensions admit only the order-2 free action");
  require(truncation >= 0 && truncation <= order, "truncation must lie in [0, order]");
}

nlohmann::json KernelSpec::to_json() const { return {{"n", n}, {"order", order}, {"truncation", truncation}}; }

std::vector<Vec> orbit(const KernelSpec& spec, const Vec& y) {
  spec.validate();
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(spec.order));
  for (int k = 0; k < spec.order; ++k) {
    Vec z = y;
    if (spec.n % 2 == 1) {
      if (k == 1)
        for (auto& v : z) v = -v;
    } else {
      const double th = 2 * kPi * k / spec.order, c = std::cos(th), s = std::sin(th);
      for (int i = 0; i + 1 < spec.n; i += 2) {
        const auto u = static_cast<std::size_t>(i);
        z[u] = c * y[u] - s * y[u + 1];
        z[u + 1] = s * y[u] + c * y[u + 1];
      }
    }
    out.push_back(z);
  }
  return out;
}

double distance(const KernelSpec& spec, const Vec& x, const Vec& y) {
  double d = std::numeric_limits<double>::infinity();
  for (const Vec& z : orbit(spec, y)) d = std::min(d, norm(minus(x, z), spec.n));
  return d;
}

double gaussian(int n, double s, double t) { return std::exp(-s * s / (4 * t) - 0.5 * n * std::log(4 * kPi * t)); }

KernelValue kernel(const KernelSpec& spec, const Vec& x, const Vec& y, double t) {
  require(t > 0, "heat kernel needs t > 0");
  const auto images = orbit(spec, y);
  std::vector<double> dist;
  for (const Vec& z : images) dist.push_back(norm(minus(x, z), spec.n));
  std::vector<std::size_t> idx(images.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  KernelValue out;
  out.distance = dist[idx[0]];
  const auto used = static_cast<std::size_t>(spec.images());
  const double g0 = gaussian(spec.n, out.distance, t);
  out.image_sum = 0;
  for (std::size_t k = 0; k < used; ++k) {
    const Vec& z = images[idx[k]];
    const double d = dist[idx[k]];
    const double e = std::exp(-(d - out.distance) * (d + out.distance) / (4 * t));
    out.image_sum += e;
    for (int i = 0; i < spec.n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      out.image_gradient[u] -= (x[u] - z[u]) / (2 * t) * e;
    }
  }
  out.value = g0 * out.image_sum;
  for (int i = 0; i < spec.n; ++i) out.gradient[static_cast<std::size_t>(i)] = g0 * out.image_gradient[static_cast<std::size_t>(i)];
  if (used < idx.size()) {
    const double d = dist[idx[used]];
    const double rel = static_cast<double>(idx.size() - used) *
                       std::exp(-(d - out.distance) * (d + out.distance) / (4 * t)) / out.image_sum;
    out.truncation_bound = rel * out.value;
    if (rel > 1e-12)
      throw NumericalError("image-sum truncation error exceeds 1e-12 of the kernel value");
  }
  return out;
}

double kernel_mass(const KernelSpec& spec, const Vec& x, double t) {
  spec.validate();
  require(t > 0, "heat kernel needs t > 0");
  (void)x;  // each image integrates over ℝⁿ independently of x
  const double one = radial_integral(spec.n, [&](double s) { return gaussian(spec.n, s, t); }, 0, gaussian_reach(t));
  return spec.images() * one / spec.order;
}

double semigroup_defect(int n, double dist, double s, double t) {
  require(s > 0 && t > 0 && dist >= 0, "semigroup check needs s, t > 0");
  ShellIntegrand f;
  f.g = [&](double r) { return gaussian(n, r, t); };
  f.w = [&](double r) { return gaussian(n, r, s); };
  f.g_width = std::sqrt(t);
  f.g_reach = gaussian_reach(t);
  f.w_width = std::sqrt(s);
  const double lhs = exterior_integral(n, dist, 0, f);
  const double rhs = gaussian(n, dist, s + t);
  return std::abs(lhs - rhs) / rhs;
}

RadialHeat heat_evolve_radial(int n, const std::function<double(double)>& u0, double r, double t, double scale) {
  require(t > 0 && r >= 0 && scale > 0, "heat evolution needs t > 0");
  ShellIntegrand f;
  f.w = u0;
  f.g_width = std::sqrt(t);
  f.g_reach = gaussian_reach(t, 1, 1);
  f.w_width = std::min(scale, std::sqrt(t));
  RadialHeat out;
  f.g = [&](double s) { return gaussian(n, s, t); };
  out.u = exterior_integral(n, r, 0, f);
  // ∂t G = G (s²/4t² − n/2t).
  f.g = [&](double s) { return gaussian(n, s, t) * (s * s / (4 * t * t) - 0.5 * n / t); };
  out.u_t = exterior_integral(n, r, 0, f);
  return out;
}

std::vector<KernelSample> make_samples(const KernelSpec& spec, int count, double d_max, double t_lo, double t_hi,
                                       std::uint64_t seed) {
  spec.validate();
  require(count > 0 && d_max >= 0 && t_lo > 0 && t_hi >= t_lo, "bad sample request");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  auto direction = [&] {
    Vec v{};
    double s = 0;
    while (s < 1e-12) {
      s = 0;
      for (int i = 0; i < spec.n; ++i) {
        v[static_cast<std::size_t>(i)] = normal(rng);
        s += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
      }
    }
    for (auto& c : v) c /= std::sqrt(s);
    return v;
  };
  std::vector<KernelSample> out;
  const int diagonal = std::min(count, std::max(1, count / 16));
  for (int k = 0; k < count; ++k) {
    KernelSample smp;
    const Vec u = direction();
    const double rx = 0.5 * d_max * unit(rng);
    for (std::size_t i = 0; i < u.size(); ++i) smp.x[i] = rx * u[i];
    const double step = k < diagonal ? 0.0 : d_max * unit(rng);
    const Vec v = direction();
    for (std::size_t i = 0; i < v.size(); ++i) smp.y[i] = smp.x[i] + step * v[i];
    smp.t = t_lo * std::pow(t_hi / t_lo, unit(rng));
    out.push_back(smp);
  }
  return out;
}

nlohmann::json LiYauReport::to_json() const {
  return {{"C", C},           {"c", c},           {"C_calibrated", C_calibrated}, {"min_margin", min_margin},
          {"worst_d", worst_d}, {"worst_t", worst_t}, {"samples", samples}};
}

LiYauReport liyau_check(const KernelSpec& spec, const std::vector<KernelSample>& samples, double slack) {
  spec.validate();
  require(slack >= 0 && slack < 0.25, "slack must lie in [0, 1/4)");
  LiYauReport rep;
  rep.c = 0.25 - slack;
  rep.C = std::pow(4 * kPi, -0.5 * spec.n) * spec.order;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const KernelValue h = kernel(spec, s.x, s.y, s.t);
    // H t^{n/2} e^{c d²/t} = (4π)^{−n/2} e^{−slack·d²/t} Σ_γ e^{−(|x−γy|² − d²)/4t}.
    const double scaled =
        std::pow(4 * kPi, -0.5 * spec.n) * std::exp(-slack * h.distance * h.distance / s.t) * h.image_sum;
    rep.C_calibrated = std::max(rep.C_calibrated, scaled);
    const double margin = 1 - scaled / rep.C;
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.worst_d = h.distance;
      rep.worst_t = s.t;
    }
    ++rep.samples;
  }
  return rep;
}

namespace {

double gradient_ratio(const KernelSpec& spec, const KernelSample& s, double* flat_defect) {
  const KernelValue h = kernel(spec, s.x, s.y, s.t);
  const double g = norm(h.image_gradient, spec.n) / h.image_sum;  // |∇H| / H
  if (flat_defect && spec.order == 1) *flat_defect = std::abs(g - h.distance / (2 * s.t)) * s.t;
  return g / (1 / std::sqrt(s.t) + h.distance / s.t);
}

}  // namespace

nlohmann::json GradientReport::to_json() const {
  return {{"C", C},
          {"max_ratio", max_ratio},
          {"min_margin", min_margin},
          {"max_flat_defect", max_flat_defect},
          {"samples", samples}};
}

GradientReport gradient_bound_check(const KernelSpec& spec, const std::vector<KernelSample>& samples, double C) {
  spec.validate();
  require(C > 0, "gradient constant must be positive");
  GradientReport rep;
  rep.C = C;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    double defect = 0;
    const double ratio = gradient_ratio(spec, s, &defect);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.min_margin = std::min(rep.min_margin, 1 - ratio / C);
    rep.max_flat_defect = std::max(rep.max_flat_defect, defect);
    ++rep.samples;
  }
  return rep;
}

double calibrate_gradient_constant(const KernelSpec& spec, const std::vector<KernelSample>& samples) {
  spec.validate();
  double c = 0;
  for (const auto& s : samples) c = std::max(c, gradient_ratio(spec, s, nullptr));
  return c;
}

}  // namespace rdt::heat
