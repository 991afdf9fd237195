#include "rdt/flow/monitors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace rdt::flow {

namespace {

using tensor::Mat;
using tensor::SymJet;

struct Line {
  double slope = 0, residual = 0;
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    A(i, 0) = 1;
    A(i, 1) = x[static_cast<std::size_t>(i)];
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  return {c(1), std::sqrt((A * c - b).squaredNorm() / static_cast<double>(m))};
}

// f = |T|² with the Euclidean metric, and its first two derivatives.
struct ScalarJet {
  double v = 0;
  tensor::Vec d{};
  Mat dd{};
};

ScalarJet square_norm(const SymJet& t) {
  const int n = t.n;
  ScalarJet f;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      f.v += t.v[i][j] * t.v[i][j];
      for (int a = 0; a < n; ++a) {
        f.d[a] += 2 * t.v[i][j] * t.d[a][i][j];
        for (int b = 0; b < n; ++b) f.dd[a][b] += 2 * (t.d[a][i][j] * t.d[b][i][j] + t.v[i][j] * t.dd[a][b][i][j]);
      }
    }
  return f;
}

// Δ_{g,g0} f^{s} and |∇ f^{s}|²_g for f > 0 on a flat background.
double power_laplacian(const ScalarJet& f, double s, const Mat& gi, int n) {
  if (f.v == 0) return 0;
  double out = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      out += gi[a][b] * (s * (s - 1) * std::pow(f.v, s - 2) * f.d[a] * f.d[b] + s * std::pow(f.v, s - 1) * f.dd[a][b]);
  return out;
}

double power_gradient2(const ScalarJet& f, double s, const Mat& gi, int n) {
  if (f.v == 0) return 0;
  double out = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out += gi[a][b] * f.d[a] * f.d[b];
  return s * s * std::pow(f.v, 2 * s - 2) * out;
}

double frobenius(const tensor::R4& rm, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += rm[i][j][k][l] * rm[i][j][k][l];
  return std::sqrt(s);
}

RadialFlowState rate_as_state(const RadialFlowState& s, const RadialRhs& m) {
  RadialFlowState out = s;
  out.a = m.da;
  out.b = m.db;
  return out;
}

}  // namespace

nlohmann::json DecayFit::to_json() const {
  return {{"t_lo", t_lo},
          {"t_hi", t_hi},
          {"snapshots", snapshots},
          {"temporal_exponent", temporal_exponent},
          {"temporal_target", temporal_target},
          {"temporal_residual", temporal_residual},
          {"temporal_exponent_plain_t", temporal_exponent_plain_t},
          {"spatial_exponent", spatial_exponent},
          {"spatial_target", spatial_target},
          {"parabolic_exponent", parabolic_exponent},
          {"parabolic_target", parabolic_target},
          {"joint_residual", joint_residual},
          {"h_weighted_sup", h_weighted_sup},
          {"h_weighted_initial", h_weighted_initial},
          {"ell_prime_on_boundary", ell_prime_on_boundary}};
}

DecayFit fit_m_decay(const Trajectory& tr, double ell, double ell_prime, double t_lo, double t_hi) {
  require(tr.size() >= 2, "trajectory has no snapshots");
  if (t_hi <= 0) t_hi = tr.times.back();
  require(t_lo > 0 && t_hi >= 10 * t_lo * (1 - 1e-12), "fit window must span at least one decade");
  const grid::RadialGrid& g = tr.grid();
  const int n = tr.config.n;
  DecayFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.temporal_target = (ell - ell_prime) / 2 + 1;
  fit.spatial_target = ell_prime;
  fit.parabolic_target = fit.temporal_target;
  fit.ell_prime_on_boundary = ell_prime <= std::max(0.0, 2 - ell);

  std::vector<double> x, xt, y;
  std::vector<std::array<double, 3>> rows;
  std::vector<double> rhs;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double t = tr.times[k];
    double hw = 0;
    for (int i = 0; i < g.size(); ++i) {
      const auto u = static_cast<std::size_t>(i);
      hw = std::max(hw, std::pow(grid::rho(g.r(i)), ell) * norm_h(n, tr.states[k].a[u] - 1, tr.states[k].b[u] - 1));
    }
    fit.h_weighted_sup = std::max(fit.h_weighted_sup, hw);
    if (k == 0) fit.h_weighted_initial = hw;
    if (t < t_lo * (1 - 1e-12) || t > t_hi * (1 + 1e-12)) continue;
    double ball = 0;
    for (int i = 0; i < g.size(); ++i) {
      const auto u = static_cast<std::size_t>(i);
      const double r = g.r(i), rho = grid::rho(r);
      const double m = norm_h(n, tr.rates[k].da[u], tr.rates[k].db[u]);
      if (r * r <= t) ball = std::max(ball, std::pow(rho, ell_prime) * m);
      if (r <= 10 * std::sqrt(t) && r <= 0.25 * g.r_max() && m > 0) {
        rows.push_back({1.0, -std::log(rho), -std::log(rho * rho + t)});
        rhs.push_back(std::log(m));
      }
    }
    require(ball > 0, "|M| vanishes on the fit window");
    x.push_back(std::log1p(t));
    xt.push_back(std::log(t));
    y.push_back(std::log(ball));
  }
  fit.snapshots = static_cast<int>(x.size());
  require(fit.snapshots >= 3, "fit window holds fewer than three snapshots");
  const Line l = fit_line(x, y);
  fit.temporal_exponent = -l.slope;
  fit.temporal_residual = l.residual;
  fit.temporal_exponent_plain_t = -fit_line(xt, y).slope;

  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd A(m, 3);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (int j = 0; j < 3; ++j) A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    b(i) = rhs[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  fit.spatial_exponent = c(1);
  fit.parabolic_exponent = c(2);
  fit.joint_residual = std::sqrt((A * c - b).squaredNorm() / static_cast<double>(m));
  return fit;
}

nlohmann::json InequalityReport::to_json() const {
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& s : snapshots)
    snaps.push_back({{"t", s.t},
                     {"max_h", s.max_h},
                     {"max_h_relative", s.max_h_relative},
                     {"max_m", s.max_m},
                     {"max_m_relative", s.max_m_relative}});
  return {{"q", q},
          {"lambda", lambda},
          {"applicable", applicable},
          {"reason", reason},
          {"tolerance", tolerance},
          {"max_h", max_h},
          {"max_m", max_m},
          {"max_h_relative", max_h_relative},
          {"max_m_relative", max_m_relative},
          {"passed", passed()},
          {"snapshots", snaps}};
}

InequalityReport evolution_inequality_margin(const Trajectory& tr, double q, double lambda, double tolerance) {
  require(q > 1, "inequalities need q > 1");
  require(lambda > 1, "inequalities need λ > 1");
  require(tr.size() >= 1, "trajectory has no snapshots");
  const int n = tr.config.n;
  require(n <= tensor::kMaxDim, "Cartesian jets limited to small dimensions");
  const grid::RadialGrid& g = tr.grid();
  InequalityReport rep;
  rep.q = q;
  rep.lambda = lambda;
  rep.tolerance = tolerance;
  const Mat id = tensor::identity(n);
  const SymJet g0 = tensor::constant_jet(id, n);
  const tensor::Background bg = tensor::make_background(g0);
  const double rm0 = frobenius(bg.rm, n);
  const double h_cap = std::min(std::sqrt(n) * (lambda * lambda - 1), 2 * (q - 1) / (9 * std::pow(lambda, 8)));

  for (std::size_t k = 0; k < tr.size(); ++k) {
    const DiagnosticsRow& d = tr.diagnostics[k];
    if (d.lambda > lambda || d.sup_h > h_cap) {
      rep.applicable = false;
      rep.reason = "closeness or smallness hypothesis fails at t = " + std::to_string(d.t);
    }
    const auto gd = radial_data(tr.states[k]);
    const auto md = radial_data(rate_as_state(tr.states[k], tr.rates[k]));
    InequalitySnapshot snap;
    snap.t = tr.times[k];
    for (int i = 0; i < g.size() && g.r(i) <= 0.5 * g.r_max(); ++i) {
      const auto u = static_cast<std::size_t>(i);
      const double r = g.r(i);
      const SymJet gj = cartesian_jet(n, r, gd[u]);
      RadialData hd = gd[u];
      hd.a -= 1;
      hd.b -= 1;
      const SymJet hj = cartesian_jet(n, r, hd);
      const SymJet mj = cartesian_jet(n, r, md[u]);
      const Mat gi = tensor::inverse(gj.v, n);

      // |h|^q: ∂t|h|^q = q|h|^{q−2}⟨h, M⟩.
      const ScalarJet fh = square_norm(hj);
      double hm = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) hm += hj.v[a][b] * mj.v[a][b];
      const double s = q / 2;
      const double dt_h = fh.v > 0 ? q * std::pow(fh.v, s - 1) * hm : 0.0;
      const double lap_h = power_laplacian(fh, s, gi, n);
      const double grad_h = (4 * (q - 1) / q) * power_gradient2(fh, q / 4, gi, n);
      const double src_h = 2 * q * std::pow(lambda, 4) * rm0 * std::pow(fh.v, s);
      const double res_h = dt_h - lap_h + grad_h - src_h;
      const double scale_h = std::abs(dt_h) + std::abs(lap_h) + grad_h + src_h;
      if (res_h > snap.max_h) {
        snap.max_h = res_h;
        snap.worst_r_h = r;
      }
      if (scale_h > 0) snap.max_h_relative = std::max(snap.max_h_relative, res_h / scale_h);

      // |M|^q with ∂t M = dM_g(M).
      const ScalarJet fm = square_norm(mj);
      const Mat dm = tensor::rdt_linearization(gj, mj, bg);
      double mdm = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) mdm += mj.v[a][b] * dm[a][b];
      const double dt_m = fm.v > 0 ? q * std::pow(fm.v, s - 1) * mdm : 0.0;
      const double lap_m = power_laplacian(fm, s, gi, n);
      const tensor::FGTensors fg = tensor::fg_tensors(gj, g0, bg);
      const double nf = tensor::norm_F(fg, id, id), ng = tensor::norm_G(fg, id, id);
      const double coeff = q * (4 * rm0 + lambda * lambda * nf * nf / (8 * (q - 1)) + ng);
      const double src_m = coeff * std::pow(fm.v, s);
      const double res_m = dt_m - lap_m - src_m;
      const double scale_m = std::abs(dt_m) + std::abs(lap_m) + src_m;
      if (res_m > snap.max_m) {
        snap.max_m = res_m;
        snap.worst_r_m = r;
      }
      if (scale_m > 0) snap.max_m_relative = std::max(snap.max_m_relative, res_m / scale_m);
    }
    rep.max_h = std::max(rep.max_h, snap.max_h);
    rep.max_m = std::max(rep.max_m, snap.max_m);
    rep.max_h_relative = std::max(rep.max_h_relative, snap.max_h_relative);
    rep.max_m_relative = std::max(rep.max_m_relative, snap.max_m_relative);
    rep.snapshots.push_back(snap);
  }
  return rep;
}

std::string to_string(ComparisonReport::Status s) {
  switch (s) {
    case ComparisonReport::Status::kClean:
      return "clean";
    case ComparisonReport::Status::kPreconditionFailure:
      return "precondition_failure";
    case ComparisonReport::Status::kInteriorViolation:
      return "interior_violation";
  }
  return "unknown";
}

nlohmann::json ComparisonReport::to_json() const {
  return {{"status", to_string(status)}, {"A", A},
          {"q", q},                      {"times", times},
          {"margins", margins},          {"relative_margins", relative_margins},
          {"violation_t", violation_t},  {"violation_r", violation_r},
          {"message", message}};
}

namespace {

template <class Fn>
void for_region(const Trajectory& tr, std::size_t k, Fn fn) {
  const grid::RadialGrid& g = tr.grid();
  for (int i = 0; i < g.size() && g.r(i) <= 0.25 * g.r_max(); ++i) {
    const auto u = static_cast<std::size_t>(i);
    fn(g.r(i), norm_h(tr.config.n, tr.rates[k].da[u], tr.rates[k].db[u]));
  }
}

}  // namespace

double calibrate_comparison_amplitude(const Trajectory& tr, const barriers::BarrierSpec& barrier, double q,
                                      double safety) {
  require(tr.size() >= 1, "trajectory has no snapshots");
  double worst = 0;
  for_region(tr, 0, [&](double r, double m) {
    worst = std::max(worst, std::pow(m, q) / barriers::barrier_G(barrier, r, tr.times[0]).v);
  });
  return safety * std::pow(worst, 1 / q);
}

ComparisonReport comparison_monitor(const Trajectory& tr, const barriers::BarrierSpec& barrier, double A, double q) {
  barriers::validate_G(barrier);
  require(A > 0 && q >= 1, "comparison needs A > 0 and q ≥ 1");
  require(tr.size() >= 1, "trajectory has no snapshots");
  ComparisonReport rep;
  rep.A = A;
  rep.q = q;
  const double Aq = std::pow(A, q);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double t = tr.times[k] - tr.times[0];
    double margin = std::numeric_limits<double>::infinity(), rel = margin, worst_r = 0;
    for_region(tr, k, [&](double r, double m) {
      const double bound = Aq * barriers::barrier_G(barrier, r, t).v;
      const double mq = std::pow(m, q);
      if (bound - mq < margin) {
        margin = bound - mq;
        worst_r = r;
      }
      rel = std::min(rel, 1 - mq / bound);
    });
    rep.times.push_back(tr.times[k]);
    rep.margins.push_back(margin);
    rep.relative_margins.push_back(rel);
    const bool violated = k == 0 ? margin < 0 : margin <= 0;
    if (violated && rep.status == ComparisonReport::Status::kClean) {
      rep.status = k == 0 ? ComparisonReport::Status::kPreconditionFailure : ComparisonReport::Status::kInteriorViolation;
      rep.violation_t = tr.times[k];
      rep.violation_r = worst_r;
      rep.message = k == 0 ? "initial data exceed A^q G; comparison not applicable"
                           : "|M|^q reached A^q G inside the region";
      if (k == 0) break;
    }
  }
  return rep;
}

}  // namespace rdt::flow
