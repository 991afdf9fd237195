#include "rdt/barriers/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdt/common.hpp"

namespace rdt::barriers {

double delta_mu_apply(const RadialOperator& op, const RadialJet& f) {
  require(op.mu >= 1, "Δ_μ needs μ ≥ 1");
  return f.drr + (op.mu - 1) * f.dr_over_r;
}

double delta_mu_apply(const RadialOperator& op, const std::function<double(double)>& f, double r, double h,
                      bool even_at_origin) {
  require(op.mu >= 1, "Δ_μ needs μ ≥ 1");
  require(h > 0, "step must be positive");
  if (r == 0) {
    require(even_at_origin, "Δ_μ at r = 0 is only defined for even functions");
    const double f0 = f(0), f1 = f(h), f2 = f(2 * h);
    const double d2 = (32 * (f1 - f0) - 2 * (f2 - f0)) / (12 * h * h);
    return op.mu * d2;
  }
  // Near the origin use the even reflection if declared; otherwise keep the
  // stencil inside r > 0.
  auto F = [&](double x) { return x < 0 && even_at_origin ? f(-x) : f(x); };
  if (r < 2 * h && !even_at_origin) h = r / 2.5;
  const double fm2 = F(r - 2 * h), fm1 = F(r - h), f0 = F(r), fp1 = F(r + h), fp2 = F(r + 2 * h);
  const double d1 = (8 * (fp1 - fm1) - (fp2 - fm2)) / (12 * h);
  const double d2 = (16 * ((fp1 - f0) + (fm1 - f0)) - ((fp2 - f0) + (fm2 - f0))) / (12 * h * h);
  return d2 + (op.mu - 1) * d1 / r;
}

void validate_F(const BarrierSpec& s) {
  require(s.nu >= 1, "F needs ν ≥ 1");
  require(s.k > 0 && s.k < s.nu, "F needs 0 < k < ν");
}

void validate_G(const BarrierSpec& s) {
  require(s.nu > 2, "G needs ν > 2");
  require(s.l > 0 && s.l <= s.k && s.k < s.nu, "G needs 0 < ℓ ≤ k < ν");
  require(s.l < s.nu - 2, "G needs ℓ < ν − 2");
  require(s.eps > 0, "G needs ε > 0");
}

RadialJet barrier_F(const BarrierSpec& s, double r, double t) {
  validate_F(s);
  require(t > 0, "F needs t > 0");
  require(r >= 0, "F needs r ≥ 0");
  const double a = s.k / 2, b = (s.nu - s.k) / 2;
  const double A = 1.0 / (std::pow(2.0, s.k) * std::tgamma(a));
  const double u = r * r / (4 * t);
  const ChiValue c = kummer_chi({a, b}, u);
  const double pre = A * std::pow(t, -a);
  RadialJet j;
  j.v = pre * c.value;
  j.dr_over_r = pre * c.d1 / (2 * t);
  j.dr = j.dr_over_r * r;
  j.drr = pre * (c.d2 * r * r / (4 * t * t) + c.d1 / (2 * t));
  j.dt = pre * (-a * c.value - u * c.d1) / t;
  return j;
}

double barrier_G_lower(const BarrierSpec& s, double r, double t) {
  return s.eps * s.eps * std::pow(r * r + 1, -s.l / 2) * std::pow(r * r + t + 1, -(s.k - s.l) / 2);
}

RadialJet barrier_G(const BarrierSpec& s, double r, double t) {
  validate_G(s);
  require(t >= 0, "G needs t ≥ 0");
  require(r >= 0, "G needs r ≥ 0");
  const double P = r * r + 1, Q = r * r + t + 1, m = s.k - s.l;
  const double g1 = barrier_G_lower(s, r, t);
  const double Lr = -s.l / P - m / Q;  // L / r
  const double L = Lr * r;
  const double Lp = -s.l * (P - 2 * r * r) / (P * P) - m * (Q - 2 * r * r) / (Q * Q);
  const RadialJet f = barrier_F(s, r, t + 1);
  RadialJet j;
  j.v = g1 + f.v;
  j.dr = g1 * L + f.dr;
  j.dr_over_r = g1 * Lr + f.dr_over_r;
  j.drr = g1 * (L * L + Lp) + f.drr;
  j.dt = -g1 * m / (2 * Q) + f.dt;
  return j;
}

std::vector<double> VerificationGrid::r_nodes() const {
  std::vector<double> r;
  if (include_origin) r.push_back(0.0);
  const int m = nr - static_cast<int>(r.size());
  for (int i = 0; i < m; ++i) r.push_back(r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (m - 1)));
  return r;
}

std::vector<double> VerificationGrid::t_nodes() const {
  std::vector<double> t;
  for (int i = 0; i < nt; ++i) t.push_back(t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (nt - 1)));
  return t;
}

nlohmann::json VerificationGrid::to_json() const {
  return {{"r_lo", r_lo}, {"r_hi", r_hi}, {"t_lo", t_lo},  {"t_hi", t_hi},
          {"nr", nr},     {"nt", nt},     {"origin", include_origin}, {"spacing", "log"}};
}

namespace {

VerificationGrid grid_from_json(const nlohmann::json& j) {
  VerificationGrid g;
  g.r_lo = j.at("r_lo");
  g.r_hi = j.at("r_hi");
  g.t_lo = j.at("t_lo");
  g.t_hi = j.at("t_hi");
  g.nr = j.at("nr");
  g.nt = j.at("nt");
  g.include_origin = j.at("origin");
  return g;
}

nlohmann::json spec_json(const BarrierSpec& s, double mu) {
  nlohmann::json j{{"k", s.k}, {"l", s.l}, {"nu", s.nu}, {"eps", s.eps}};
  if (mu > 0) j["mu"] = mu;
  return j;
}

BarrierSpec spec_from_json(const nlohmann::json& j) {
  return BarrierSpec{j.at("k"), j.at("l"), j.at("nu"), j.at("eps")};
}

template <class Fn>
void for_grid(const VerificationGrid& g, Fn fn) {
  const auto rs = g.r_nodes();
  const auto ts = g.t_nodes();
  for (double t : ts)
    for (double r : rs) fn(r, t);
}

// Recorded constants sit strictly inside the admissible range so the margin
// stays bounded away from zero.
constexpr double kRecordedFraction = 0.5;

// Largest c in [0, hi] with margin(c) > 0, by bisection.
template <class Margin>
double bisect_admissible(Margin margin, double hi) {
  double lo = 0;
  if (!(margin(lo) > 0)) return -1;
  if (margin(hi) > 0) return hi;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (margin(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

CalibrationRecord calibrate_F_sandwich(const BarrierSpec& s, const VerificationGrid& g) {
  validate_F(s);
  double c = std::numeric_limits<double>::infinity(), C = 0;
  for_grid(g, [&](double r, double t) {
    const double q = barrier_F(s, r, t).v * std::pow(r * r + t, s.k / 2);
    c = std::min(c, q);
    C = std::max(C, q);
  });
  CalibrationRecord rec{"F.sandwich", spec_json(s, 0), {{"c", c}, {"C", C}}, g.to_json(), c, c > 0 && std::isfinite(C), ""};
  return rec;
}

CalibrationRecord calibrate_G_derivative(const BarrierSpec& s, const VerificationGrid& g) {
  validate_G(s);
  double c = std::numeric_limits<double>::infinity(), C = 0;
  for_grid(g, [&](double r, double t) {
    if (r == 0) return;
    const RadialJet j = barrier_G(s, r, t);
    const double q = -j.dr * (r * r + 1) / (r * j.v);
    c = std::min(c, q);
    C = std::max(C, q);
  });
  return CalibrationRecord{"G.dr_bound", spec_json(s, 0), {{"c", c}, {"C", C}}, g.to_json(), c, c > 0, ""};
}

CalibrationRecord supersolution_margin_F(const BarrierSpec& s, double mu, const VerificationGrid& g) {
  validate_F(s);
  require(mu >= s.nu, "F supersolution needs μ ≥ ν");
  std::vector<double> lhs, w;
  double resid = 0;
  for_grid(g, [&](double r, double t) {
    const RadialJet j = barrier_F(s, r, t);
    const double L = j.dt - delta_mu_apply({mu}, j);
    lhs.push_back(L);
    w.push_back(j.v / (r * r + t));
    resid = std::max(resid, std::abs(L));
  });
  auto margin = [&](double c) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lhs.size(); ++i) m = std::min(m, lhs[i] - c * w[i]);
    return m;
  };
  CalibrationRecord rec{"F.supersolution", spec_json(s, mu), {}, g.to_json(), 0, false, ""};
  if (mu == s.nu) {
    // Equality case: the heat residual itself.
    rec.constants = {{"max_abs_residual", resid}};
    rec.min_margin = -resid;
    rec.passed = resid <= 1e-8;
    return rec;
  }
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lhs.size(); ++i) hi = std::min(hi, lhs[i] / w[i]);
  const double c_max = bisect_admissible(margin, std::max(hi, 0.0) * 2 + 1);
  const double c = kRecordedFraction * c_max;
  rec.constants = {{"c", std::max(c, 0.0)}, {"c_max", std::max(c_max, 0.0)}};
  rec.min_margin = margin(std::max(c, 0.0));
  rec.passed = c > 0 && rec.min_margin > 0;
  return rec;
}

namespace {

struct GMarginData {
  std::vector<double> lhs, w;
};

GMarginData g_margin_data(const BarrierSpec& s, double mu, const VerificationGrid& g) {
  GMarginData d;
  for_grid(g, [&](double r, double t) {
    const RadialJet j = barrier_G(s, r, t);
    d.lhs.push_back(j.dt - delta_mu_apply({mu}, j));
    d.w.push_back(s.eps * s.eps * j.v / (r * r + 1));
  });
  return d;
}

double g_margin(const GMarginData& d, double c) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.lhs.size(); ++i) m = std::min(m, d.lhs[i] - c * d.w[i]);
  return m;
}

}  // namespace

CalibrationRecord supersolution_margin_G(const BarrierSpec& s, double mu, const VerificationGrid& g) {
  validate_G(s);
  require(mu >= s.nu + s.eps, "G supersolution needs μ ≥ ν + ε");
  const GMarginData d = g_margin_data(s, mu, g);
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.lhs.size(); ++i) hi = std::min(hi, d.lhs[i] / d.w[i]);
  const double c_max = bisect_admissible([&](double x) { return g_margin(d, x); }, std::max(hi, 0.0) * 2 + 1);
  const double c = kRecordedFraction * c_max;
  CalibrationRecord rec{"G.supersolution", spec_json(s, mu), {{"c", std::max(c, 0.0)}, {"c_max", std::max(c_max, 0.0)}},
                        g.to_json(), 0, false, ""};
  rec.min_margin = g_margin(d, std::max(c, 0.0));
  rec.passed = c > 0 && rec.min_margin > 0;
  return rec;
}

double largest_admissible_eps(BarrierSpec s, double mu, const VerificationGrid& g, double eps_lo, double eps_hi) {
  auto ok = [&](double e) {
    s.eps = e;
    return g_margin(g_margin_data(s, mu, g), 0.0) > 0;
  };
  if (!ok(eps_lo)) return 0.0;
  if (ok(eps_hi)) return eps_hi;
  double lo = std::log(eps_lo), hi = std::log(eps_hi);
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ok(std::exp(mid)))
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(lo);
}

CalibrationRecord calibrate_chi(const KummerParams& p, const std::vector<double>& u) {
  const ChiBounds b = calibrate_chi_bounds(p, u);
  CalibrationRecord rec;
  rec.bound_id = "chi.bounds";
  rec.parameters = {{"a", p.a}, {"b", p.b}};
  rec.constants = {{"c_ratio", b.c_ratio}, {"C_ratio", b.C_ratio}, {"c_d1", b.c_d1},
                   {"C_d1", b.C_d1},       {"c_d2", b.c_d2},       {"C_d2", b.C_d2}};
  rec.grid = {{"u", u.size()}, {"u_min", u.front()}, {"u_max", u.back()}, {"spacing", "log"}};
  rec.min_margin = std::min({b.c_ratio, b.c_d1, b.c_d2});
  rec.passed = rec.min_margin > 0 && b.decreasing && b.convex;
  return rec;
}

namespace {
std::vector<double> chi_grid_from_json(const nlohmann::json& g) {
  const std::size_t m = g.at("u");
  const double lo = g.at("u_min"), hi = g.at("u_max");
  std::vector<double> u;
  if (lo == 0) {
    u.push_back(0);
    for (std::size_t i = 0; i + 1 < m; ++i)
      u.push_back(1e-3 * std::pow(hi / 1e-3, static_cast<double>(i) / static_cast<double>(m - 2)));
  } else {
    for (std::size_t i = 0; i < m; ++i) u.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(m - 1)));
  }
  return u;
}
}  // namespace

std::vector<double> chi_sample_grid(double u_max, int count) {
  std::vector<double> u{0.0};
  for (int i = 0; i + 1 < count; ++i) u.push_back(1e-3 * std::pow(u_max / 1e-3, static_cast<double>(i) / (count - 2)));
  return u;
}

bool reverify(const CalibrationRecord& rec) {
  CalibrationRecord again;
  const auto& p = rec.parameters;
  if (rec.bound_id == "chi.bounds") {
    again = calibrate_chi({p.at("a"), p.at("b")}, chi_grid_from_json(rec.grid));
  } else {
    const VerificationGrid g = grid_from_json(rec.grid);
    const BarrierSpec s = spec_from_json(p);
    if (rec.bound_id == "F.sandwich")
      again = calibrate_F_sandwich(s, g);
    else if (rec.bound_id == "G.dr_bound")
      again = calibrate_G_derivative(s, g);
    else if (rec.bound_id == "F.supersolution")
      again = supersolution_margin_F(s, p.at("mu"), g);
    else if (rec.bound_id == "G.supersolution")
      again = supersolution_margin_G(s, p.at("mu"), g);
    else
      throw PreconditionError("unknown bound id " + rec.bound_id);
  }
  return again.canonical() == rec.canonical();
}

}  // namespace rdt::barriers
