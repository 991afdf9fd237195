#include "rdt/heat/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "rdt/common.hpp"
#include "rdt/grid/radial_grid.hpp"

namespace rdt::heat {

namespace {

// (s^{2α} G_t(s) / t^α)^a.
RadialFn kernel_factor(int n, double a, double alpha, double t) {
  return [=](double s) {
    if (s == 0) return alpha > 0 ? 0.0 : std::exp(-a * 0.5 * n * std::log(4 * kPi * t));
    return std::exp(a * (2 * alpha * std::log(s) - alpha * std::log(t) - 0.5 * n * std::log(4 * kPi * t) -
                         s * s / (4 * t)));
  };
}

ShellIntegrand kernel_integrand(int n, double a, double alpha, double t, RadialFn w) {
  ShellIntegrand f;
  f.g = kernel_factor(n, a, alpha, t);
  f.w = std::move(w);
  f.g_width = std::sqrt(2 * t / a) * std::max(1.0, std::sqrt(alpha));
  f.g_reach = gaussian_reach(t, a, a * alpha);
  return f;
}

// Radius of the region ρ(y) ≤ ρ(x)/2 (zero when it is empty).
double inner_radius(double r_x) {
  const double q = 0.25 * (1 + r_x * r_x) - 1;
  return q > 0 ? std::sqrt(q) : 0.0;
}

double split_integral(int n, double r_x, const ShellIntegrand& f, double* part_I = nullptr,
                      double* part_II = nullptr) {
  const double R = inner_radius(r_x);
  const double I = R > 0 ? ball_integral(n, r_x, R, f) : 0.0;
  const double II = exterior_integral(n, r_x, R, f);
  if (part_I) *part_I = I;
  if (part_II) *part_II = II;
  return I + II;
}

void require_flat(const KernelSpec& spec) {
  spec.validate();
  require(spec.order == 1, "kernel norm and convolution checks are implemented on ℝⁿ (order 1) only");
}

std::vector<double> log_nodes(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(count == 1 ? lo : lo * std::pow(hi / lo, double(i) / (count - 1)));
  return v;
}

}  // namespace

void EstimateParams::validate(int n) const {
  require(a >= 1, "kernel exponent a must be at least 1");
  require(alpha >= 0 && beta >= 0, "weights α, β must be nonnegative");
  require(a * beta < n, "need a < n/β for an integrable weight");
}

nlohmann::json EstimateParams::to_json() const {
  return {{"a", a}, {"alpha", alpha}, {"beta", beta}, {"b", b}, {"c", c}};
}

nlohmann::json WeightedNorm::to_json() const {
  return {{"value", value}, {"region_I", region_I},   {"region_II", region_II},
          {"rhs", rhs},     {"ratio", ratio},         {"near_boundary", near_boundary}};
}

double gaussian_lp_norm(int n, double a, double t) {
  return std::pow(a, -0.5 * n / a) * std::pow(4 * kPi * t, -0.5 * n * (a - 1) / a);
}

WeightedNorm weighted_kernel_lp_norm(const KernelSpec& spec, const EstimateParams& p, double r_x, double t) {
  require_flat(spec);
  p.validate(spec.n);
  require(t > 0 && r_x >= 0, "need t > 0 and |x| ≥ 0");
  const int n = spec.n;
  const double ab = p.a * p.beta;
  const auto f = kernel_integrand(n, p.a, p.alpha, t, [ab](double r) { return std::pow(grid::rho(r), -ab); });
  WeightedNorm out;
  const double total = split_integral(n, r_x, f, &out.region_I, &out.region_II);
  out.value = std::pow(total, 1 / p.a);
  const double rx = grid::rho(r_x);
  out.rhs = std::pow(t, -0.5 * n * (p.a - 1) / p.a) * std::pow(rx * rx + t, -0.5 * p.beta);
  out.ratio = out.value / out.rhs;
  out.near_boundary = p.near_boundary(n);
  return out;
}

std::vector<double> NormSweep::t_nodes() const { return log_nodes(t_lo, t_hi, nt); }
std::vector<double> NormSweep::rho_nodes() const { return log_nodes(rho_lo, rho_hi, nrho); }

NormSweep NormSweep::refined() const {
  NormSweep s = *this;
  s.nt = 2 * nt - 1;
  s.nrho = 2 * nrho - 1;
  return s;
}

nlohmann::json NormSweep::to_json() const {
  return {{"t_lo", t_lo}, {"t_hi", t_hi}, {"nt", nt}, {"rho_lo", rho_lo}, {"rho_hi", rho_hi}, {"nrho", nrho}};
}

CalibrationRecord calibrate_weighted_norm(const KernelSpec& spec, const EstimateParams& p, const NormSweep& sweep) {
  require(sweep.nt >= 1 && sweep.nrho >= 1 && sweep.t_lo > 0 && sweep.rho_lo >= 1, "bad norm sweep");
  auto extremes = [&](const NormSweep& s, double& hi, double& lo) {
    hi = 0;
    lo = std::numeric_limits<double>::infinity();
    for (double t : s.t_nodes())
      for (double rho : s.rho_nodes()) {
        const double r = std::sqrt(std::max(0.0, rho * rho - 1));
        const double q = weighted_kernel_lp_norm(spec, p, r, t).ratio;
        hi = std::max(hi, q);
        lo = std::min(lo, q);
      }
  };
  double C = 0, C_min = 0, C_ref = 0, C_ref_min = 0;
  extremes(sweep, C, C_min);
  extremes(sweep.refined(), C_ref, C_ref_min);
  const double stability = std::max(C, C_ref) / std::min(C, C_ref);
  CalibrationRecord rec;
  rec.bound_id = "heat.kernel_lp_norm";
  rec.parameters = {{"kernel", spec.to_json()}, {"params", p.to_json()}, {"near_boundary", p.near_boundary(spec.n)}};
  rec.constants = {{"C", C},
                   {"C_min", C_min},
                   {"C_refined", C_ref},
                   {"stability", stability},
                   {"spread", C / C_min}};
  rec.grid = {{"sweep", sweep.to_json()}, {"refined", sweep.refined().to_json()}};
  rec.min_margin = 2 - stability;
  rec.passed = std::isfinite(C) && rec.min_margin >= 0;
  return rec;
}

double source_norm(int n, const RadialSource& f, double b, double R) {
  require(static_cast<bool>(f.f), "source function must be set");
  require(b >= 1, "L^b exponent must be at least 1");
  const double hi = std::min(R, f.support);
  require(std::isfinite(hi) || f.decay * b > n, "source is not in L^b: decay·b must exceed n");
  const double v = radial_integral(n, [&](double r) { return std::pow(std::abs(f.f(r)), b); }, 0, hi);
  return std::pow(v, 1 / b);
}

std::string to_string(Clause c) {
  switch (c) {
    case Clause::kA:
      return "a";
    case Clause::kB:
      return "b";
    case Clause::kC:
      return "c";
  }
  return "?";
}

CalibrationRecord ConvolutionReport::to_record(const KernelSpec& spec) const {
  CalibrationRecord rec;
  rec.bound_id = "heat.convolution_" + to_string(clause);
  rec.parameters = {{"kernel", spec.to_json()}, {"params", params.to_json()}, {"position", position}};
  rec.constants = {{"C_calibrated", C_calibrated}};
  if (clause == Clause::kC) rec.constants["sharp_min_margin"] = sharp_min_margin;
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& s : samples) ts.push_back(s.t);
  rec.grid = {{"t", ts}};
  rec.min_margin = min_margin;
  rec.passed = passed();
  return rec;
}

ConvolutionReport convolution_bound_check(const KernelSpec& spec, const EstimateParams& p, const RadialSource& f,
                                          Clause clause, double position, const std::vector<double>& t_values) {
  require_flat(spec);
  require(!t_values.empty(), "need at least one time");
  const int n = spec.n;
  ConvolutionReport rep;
  rep.clause = clause;
  rep.params = p;
  rep.position = position;
  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.sharp_min_margin = std::numeric_limits<double>::infinity();

  if (clause == Clause::kA) {
    p.validate(n);
    require(p.a > 1, "clause a needs a > 1");
    const double b = p.a / (p.a - 1);
    require(p.b == 0 || std::abs(1 / p.a + 1 / p.b - 1) < 1e-12, "clause a needs 1/a + 1/b = 1");
    rep.params.b = b;
    const double fb = source_norm(n, f, b);
    const double rx = grid::rho(position);
    for (double t : t_values) {
      require(t > 0, "times must be positive");
      const auto g = kernel_integrand(n, 1, p.alpha, t, [&](double r) { return f.f(r) * std::pow(grid::rho(r), -p.beta); });
      ConvolutionSample s;
      s.t = t;
      s.lhs = std::abs(split_integral(n, position, g));
      s.bound = weighted_kernel_lp_norm(spec, p, position, t).value * fb;
      s.margin = 1 - s.lhs / s.bound;
      s.scaled = s.lhs * std::pow(t, 0.5 * n * (p.a - 1) / p.a) * std::pow(rx * rx + t, 0.5 * p.beta) / fb;
      rep.samples.push_back(s);
    }
  } else if (clause == Clause::kB) {
    p.validate(n);
    require(p.b >= 1, "clause b needs b ≥ 1");
    const double inv_c = 1 / p.a + 1 / p.b - 1;
    require(inv_c > 0, "clause b needs 1/a + 1/b > 1");
    const double c = 1 / inv_c;
    require(p.c == 0 || std::abs(p.c - c) < 1e-12 * c, "clause b needs 1/a + 1/b = 1 + 1/c");
    rep.params.c = c;
    require(position >= 1, "clause b needs R ≥ 1");
    const double R = position;
    const double fb = source_norm(n, f, p.b);
    for (double t : t_values) {
      require(t > 0, "times must be positive");
      const auto g = kernel_integrand(n, 1, p.alpha, t, [&](double r) { return f.f(r) * std::pow(grid::rho(r), -p.beta); });
      // Power-law tails beyond 10¹² are far below the quadrature tolerance.
      auto u = [&](double r) { return r > 1e12 ? 0.0 : std::pow(std::abs(split_integral(n, r, g)), c); };
      ConvolutionSample s;
      s.t = t;
      s.lhs = std::pow(radial_integral(n, u, R, std::numeric_limits<double>::infinity()), 1 / c);
      // Sampled suprema in the Young inequality.
      double s1 = 0, s2 = 0;
      for (double k : {1.0, 1.5, 2.0, 3.0, 5.0, 10.0})
        s1 = std::max(s1, weighted_kernel_lp_norm(spec, p, k * R, t).value);
      const auto ga = kernel_integrand(n, p.a, p.alpha, t, [](double) { return 1.0; });
      for (double k : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 16.0}) {
        const double y = k * R;
        s2 = std::max(s2, std::pow(grid::rho(y), -p.beta) * std::pow(exterior_integral(n, y, R, ga), 1 / p.a));
      }
      s.bound = std::pow(s1, (c - p.a) / c) * std::pow(s2, p.a / c) * fb;
      s.margin = 1 - s.lhs / s.bound;
      s.scaled = s.lhs * std::pow(t, 0.5 * n * (p.a - 1) / p.a) * std::pow(R * R + t, 0.5 * (c - p.a) * p.beta / c) / fb;
      rep.samples.push_back(s);
    }
  } else {
    require(p.b >= 1, "clause c needs b ≥ 1");
    require(position >= 1, "clause c needs R ≥ 1");
    const double R = position, b = p.b;
    const double fb = source_norm(n, f, b, R);
    const double sharp = std::pow(grid::sphere_area(n) / n, 2.0 / n) / (4 * kPi);
    const double e = 0.5 * n * (b - 1) / b;
    for (double t : t_values) {
      require(t > 0, "times must be positive");
      ShellIntegrand g;
      g.g = [&](double s) { return gaussian(n, s, t); };
      g.w = f.f;
      g.g_width = std::sqrt(t);
      g.g_reach = gaussian_reach(t);
      auto u = [&](double r) { return std::pow(std::abs(ball_integral(n, r, R, g)), b); };
      ConvolutionSample s;
      s.t = t;
      s.lhs = std::pow(radial_integral(n, u, 0, R) + radial_integral(n, u, R, R + g.g_reach), 1 / b);
      s.bound = std::min(1.0, std::pow(R * R / t, e)) * fb;
      s.margin = 1 - s.lhs / s.bound;
      s.scaled = s.lhs / fb;
      rep.sharp_min_margin = std::min(rep.sharp_min_margin, 1 - s.lhs / (std::min(1.0, std::pow(sharp * R * R / t, e)) * fb));
      rep.samples.push_back(s);
    }
  }
  for (const auto& s : rep.samples) {
    rep.min_margin = std::min(rep.min_margin, s.margin);
    rep.C_calibrated = std::max(rep.C_calibrated, s.scaled);
  }
  return rep;
}

}  // namespace rdt::heat
