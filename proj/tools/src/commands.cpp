#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "internal.hpp"
#include "rdt/barriers/barriers.hpp"
#include "rdt/common.hpp"
#include "rdt/flow/monitors.hpp"
#include "rdt/heat/duhamel.hpp"
#include "rdt/heat/estimates.hpp"
#include "rdt/ortho/two_interval.hpp"
#include "rdt/tensor/verification.hpp"

namespace rdt::app {

namespace {

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt(double v) { return io::format_double(v); }

// ---------------------------------------------------------------- flow

const std::vector<std::string> kFlowKeys{"n",     "ell",   "ell_prime", "eps",   "gamma",
                                         "T",     "cfl",   "boundary",  "shape", "model",
                                         "nodes", "r_max", "snapshots_per_decade", "t_first"};

Runner plan_flow(const config::KeyValues& kv, std::uint64_t seed) {
  config::KeyValues fk;
  for (const auto& k : kFlowKeys)
    if (kv.has(k)) fk.set(k, kv.text(k, ""));
  fk.set("seed", std::to_string(seed));
  const flow::FlowConfig cfg = guarded([&] { return flow::FlowConfig::from_key_values(fk); });
  const double lambda = number(kv, "lambda"), ineq_tol = number(kv, "inequality_tolerance");
  const double safety = number(kv, "comparison_safety"), decay_tol = number(kv, "decay_tolerance");
  const double duhamel_floor = number(kv, "duhamel_floor");
  const auto duhamel_times = static_cast<int>(integer(kv, "duhamel_times"));
  const auto duhamel_radii = static_cast<int>(integer(kv, "duhamel_radii"));
  const barriers::BarrierSpec bs{number(kv, "barrier_k"), number(kv, "barrier_l"), cfg.n - number(kv, "barrier_gamma0"),
                                 number(kv, "barrier_eps")};
  guarded([&] {
    require(lambda > 1, "lambda must exceed 1");
    require(safety >= 1, "comparison_safety must be at least 1");
    require(duhamel_times >= 1 && duhamel_radii >= 1 && duhamel_radii <= 4, "bad Duhamel sample counts");
    barriers::validate_G(bs);
    return 0;
  });

  return [=](RunContext& ctx) {
    const flow::Trajectory tr = flow::run(cfg);
    ctx.write_text("flow.ini", cfg.to_text());
    ctx.write_csv("trajectory.csv", flow::trajectory_columns(tr));
    ctx.write_csv("diagnostics.csv", flow::diagnostics_columns(tr));
    ctx.check("flow.completed", "run reached T without breakdown", tr.completed, 0,
              {{"breakdown", tr.breakdown}, {"steps", tr.steps}, {"snapshots", tr.size()}});

    double sup = 0;
    for (const auto& d : tr.diagnostics) sup = std::max(sup, d.weighted_h);
    const double bound = 2 * cfg.eps;
    ctx.check("flow.c0_stability", "sup_t sup_x rho^ell |h| <= 2 eps", sup <= bound, bound > 0 ? 1 - sup / bound : 0,
              {{"sup", sup}, {"bound", bound}});

    if (tr.completed && cfg.T >= 10 && cfg.eps > 0) {
      const flow::DecayFit fit = flow::fit_m_decay(tr, cfg.ell, cfg.ell_prime, 1.0, cfg.T);
      ctx.write_json("decay_fit.json", fit.to_json());
      const double rel = std::abs(fit.temporal_exponent - fit.temporal_target) / fit.temporal_target;
      ctx.check("flow.m_decay_exponent", "fitted decay exponent of sup_{B_sqrt(t)} rho^ell' |M| on [1, T]",
                rel <= decay_tol, decay_tol - rel,
                {{"exponent", fit.temporal_exponent}, {"target", fit.temporal_target}, {"relative_error", rel}});
    } else {
      ctx.skip("flow.m_decay_exponent", "fitted decay exponent of sup_{B_sqrt(t)} rho^ell' |M| on [1, T]",
               "needs a completed run with eps > 0 and T >= 10");
    }

    for (double q : {2.0, 4.0}) {
      const auto rep = flow::evolution_inequality_margin(tr, q, lambda, ineq_tol);
      const std::string tag = q == 2 ? "q2" : "q4";
      ctx.write_json("inequality_" + tag + ".json", rep.to_json());
      ctx.check("flow.evolution_inequality." + tag, "|h|^q and |M|^q evolution inequalities at every snapshot",
                rep.passed(), ineq_tol - std::max(rep.max_h, rep.max_m),
                {{"applicable", rep.applicable}, {"reason", rep.reason}, {"max_h", rep.max_h}, {"max_m", rep.max_m}});
    }

    const double A = flow::calibrate_comparison_amplitude(tr, bs, 2, safety);
    const auto cmp = flow::comparison_monitor(tr, bs, A, 2);
    ctx.write_json("comparison.json", cmp.to_json());
    const double cmp_margin =
        cmp.relative_margins.empty() ? 0 : *std::min_element(cmp.relative_margins.begin(), cmp.relative_margins.end());
    ctx.check("flow.comparison", "|M|^2 < A^2 G with A calibrated at t = 0",
              cmp.status == flow::ComparisonReport::Status::kClean, cmp_margin,
              {{"A", A}, {"status", flow::to_string(cmp.status)}});

    if (cfg.snapshots_per_decade >= 16 && cfg.eps > 0 && tr.completed) {
      heat::DuhamelOptions o;
      o.max_times = duhamel_times;
      o.radii = duhamel_radii;
      const auto rep = heat::duhamel_residual(heat::history_from_trajectory(tr), 2, o);
      ctx.write_json("duhamel_q2.json", rep.to_json());
      ctx.check("flow.duhamel.q2", "Duhamel inequality residual >= -floor at every sample",
                rep.min_residual >= -duhamel_floor, rep.min_residual + duhamel_floor,
                {{"min_residual", rep.min_residual},
                 {"max_tolerance", rep.max_tolerance},
                 {"samples", rep.samples.size()},
                 {"within_quadrature_tolerance", rep.passed()}});
    } else {
      ctx.skip("flow.duhamel.q2", "Duhamel inequality residual >= -floor at every sample",
               "needs a completed run with eps > 0 and at least 16 snapshots per decade");
    }
  };
}

// ---------------------------------------------------------------- barriers

std::vector<double> log_axis(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(count == 1 ? lo : lo * std::pow(hi / lo, double(i) / (count - 1)));
  return v;
}

Runner plan_barriers(const config::KeyValues& kv, std::uint64_t seed) {
  const int n = static_cast<int>(integer(kv, "n"));
  const barriers::BarrierSpec s{number(kv, "k"), number(kv, "l"), n - number(kv, "gamma0"), number(kv, "eps")};
  const double mu = n;
  const int grid_n = static_cast<int>(integer(kv, "grid"));
  const int samples = static_cast<int>(integer(kv, "residual_samples"));
  const int axis = static_cast<int>(integer(kv, "kummer_axis"));
  guarded([&] {
    require(n >= 3 && n <= 5, "n must lie in [3, 5]");
    barriers::validate_F(s);
    barriers::validate_G(s);
    require(grid_n >= 4 && samples >= 1 && axis >= 2, "bad resolution");
    return 0;
  });
  barriers::VerificationGrid g;
  g.nr = g.nt = grid_n;

  return [=](RunContext& ctx) {
    const auto ab = log_axis(0.25, 4, axis);
    const auto us = barriers::chi_sample_grid(200, 40);
    double worst = 0;
    for (double a : ab)
      for (double b : ab)
        for (double u : us) worst = std::max(worst, std::abs(barriers::chi_ode_residual({a, b}, u)));
    ctx.check("kummer.ode_residual", "chi ODE residual <= 1e-8 on [0.25,4]^2 x [0,200]", worst <= 1e-8,
              1 - worst / 1e-8, {{"max_residual", worst}});

    const barriers::KummerParams kp{s.k / 2, (s.nu - s.k) / 2};
    double dev = 0;
    nlohmann::json ratios = nlohmann::json::array();
    for (const barriers::KummerParams& p : {kp, barriers::KummerParams{1, 1}, barriers::KummerParams{2, 3}}) {
      const double r = barriers::chi_integral(p.a, p.b, 200) * std::pow(200.0, p.a) / std::tgamma(p.a);
      dev = std::max(dev, std::abs(r - 1));
      ratios.push_back({{"a", p.a}, {"b", p.b}, {"ratio", r}});
    }
    ctx.check("kummer.asymptotic_ratio", "chi(u) u^a / Gamma(a) within 2% of 1 at u = 200", dev <= 0.02, 0.02 - dev,
              {{"ratios", ratios}});

    double cf = 0;
    for (double u : us) {
      const double exact = u == 0 ? 1.0 : -std::expm1(-u) / u;
      cf = std::max(cf, std::abs(barriers::chi_integral(1, 1, u) - exact) / exact);
    }
    ctx.check("kummer.closed_form", "a = b = 1 agrees with (1 - e^-u)/u to 1e-12", cf <= 1e-12, 1 - cf / 1e-12,
              {{"max_relative_error", cf}});

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);
    double heat = 0;
    for (int i = 0; i < samples; ++i) {
      const double r = i % 10 == 0 ? 0.0 : std::pow(10.0, -3 + 6 * U(rng));
      const double t = std::pow(10.0, -2 + 8 * U(rng));
      const auto j = barriers::barrier_F(s, r, t);
      heat = std::max(heat, std::abs(j.dt - barriers::delta_mu_apply({s.nu}, j)));
    }
    ctx.check("barrier_F.heat_residual", "(dt - Delta_nu) F <= 1e-8 at random (r, t)", heat <= 1e-8, 1 - heat / 1e-8,
              {{"max_residual", heat}, {"samples", samples}});

    auto record_check = [&](const std::string& id, const std::string& desc, const CalibrationRecord& rec, bool extra,
                            double margin) {
      ctx.write_json(id + ".record.json", rec.to_json());
      ctx.check(id, desc, rec.passed && extra, margin, {{"run_id", rec.run_id()}, {"constants", rec.constants}});
    };
    const auto sandwich = barriers::calibrate_F_sandwich(s, g);
    record_check("barrier_F.sandwich", "c <= F (r^2+t)^{k/2} <= C on the verification grid", sandwich, true,
                 sandwich.min_margin);
    const auto dr = barriers::calibrate_G_derivative(s, g);
    record_check("barrier_G.derivative_bounds", "c rG/(r^2+1) <= -dr G <= C rG/(r^2+1)", dr, true, dr.min_margin);
    const auto sup = barriers::supersolution_margin_G(s, mu, g);
    const double c = sup.constants.value("c", 0.0);
    record_check("barrier_G.supersolution", "(dt - Delta_mu - c eps^2/(r^2+1)) G > 0 with c > 0", sup,
                 sup.min_margin > 0 && c > 0, c);
    const bool same = barriers::reverify(sup);
    ctx.check("barrier_G.record_reproducible", "recomputed supersolution record is bitwise identical", same, 0,
              {{"run_id", sup.run_id()}});
    const auto chi = barriers::calibrate_chi(kp, barriers::chi_sample_grid(1e3, 120));
    ctx.write_json("chi.record.json", chi.to_json());
  };
}

// ---------------------------------------------------------------- heat kernel

heat::RadialSource decaying(double decay) {
  return {[decay](double r) { return std::pow(1 + r * r, -0.5 * decay); }, decay,
          std::numeric_limits<double>::infinity(), "rho^-" + fmt(decay)};
}

Runner plan_kernel(const config::KeyValues& kv, std::uint64_t seed) {
  heat::KernelSpec spec;
  spec.n = static_cast<int>(integer(kv, "n"));
  spec.order = static_cast<int>(integer(kv, "order"));
  const int samples = static_cast<int>(integer(kv, "samples"));
  const double d_max = number(kv, "d_max"), t_lo = number(kv, "t_lo"), t_hi = number(kv, "t_hi");
  const double C = number(kv, "gradient_C");
  const heat::EstimateParams p{number(kv, "a"), number(kv, "alpha"), number(kv, "beta")};
  heat::NormSweep sweep;
  sweep.nt = static_cast<int>(integer(kv, "sweep_nt"));
  sweep.nrho = static_cast<int>(integer(kv, "sweep_nrho"));
  const auto conv_b_times = number_list(kv, "conv_b_times");
  guarded([&] {
    spec.validate();
    p.validate(spec.n);
    require(samples >= 1 && d_max >= 0 && t_lo > 0 && t_hi >= t_lo && C > 0, "bad sample parameters");
    require(sweep.nt >= 1 && sweep.nrho >= 1, "bad sweep");
    require(!conv_b_times.empty(), "conv_b_times must not be empty");
    return 0;
  });

  return [=](RunContext& ctx) {
    const auto s = heat::make_samples(spec, samples, d_max, t_lo, t_hi, seed);
    const auto ly = heat::liyau_check(spec, s);
    ctx.write_json("li_yau.json", ly.to_json());
    ctx.check("heat.li_yau", "H <= C e^{-d^2/4t} / t^{n/2} with C = |Gamma| (4 pi)^{-n/2}", ly.passed(), ly.min_margin,
              {{"C_calibrated", ly.C_calibrated}, {"samples", ly.samples}});

    const double Cg = spec.order == 1 ? C : heat::calibrate_gradient_constant(spec, s);
    const auto gr = heat::gradient_bound_check(spec, s, Cg);
    ctx.write_json("gradient.json", gr.to_json());
    ctx.check("heat.gradient", "|grad H| <= C (1/sqrt(t) + d/t) H", gr.passed(), gr.min_margin,
              {{"C", Cg}, {"max_ratio", gr.max_ratio}, {"calibrated", spec.order != 1}});

    if (spec.order != 1) {
      for (const char* id : {"heat.gaussian_closed_form", "heat.weighted_norm_stability", "heat.convolution_a",
                             "heat.convolution_b", "heat.convolution_c"})
        ctx.skip(id, "weighted kernel norms", "implemented on R^n (order 1) only");
      return;
    }
    double cf = 0;
    for (double t : {0.1, 1.0, 100.0, 1e4})
      for (double r : {0.0, 10.0}) {
        const double v = heat::weighted_kernel_lp_norm(spec, {2, 0, 0}, r, t).value;
        cf = std::max(cf, std::abs(v / heat::gaussian_lp_norm(spec.n, 2, t) - 1));
      }
    ctx.check("heat.gaussian_closed_form", "alpha = beta = 0 norm matches the Gaussian closed form to 1e-6", cf <= 1e-6,
              1 - cf / 1e-6, {{"max_relative_error", cf}});

    const auto norm = heat::calibrate_weighted_norm(spec, p, sweep);
    ctx.write_json("weighted_norm.record.json", norm.to_json());
    ctx.check("heat.weighted_norm_stability", "weighted L^a kernel norm constant stable within x2 under refinement",
              norm.passed, norm.min_margin, {{"constants", norm.constants}});

    auto conv = [&](const std::string& id, const std::string& desc, const heat::KernelSpec& k,
                    const heat::ConvolutionReport& rep) {
      const auto rec = rep.to_record(k);
      ctx.write_json(id + ".record.json", rec.to_json());
      ctx.check(id, desc, rep.passed(), rep.min_margin, {{"C_calibrated", rep.C_calibrated}});
    };
    const heat::KernelSpec k3{3, 1, 0};
    conv("heat.convolution_a", "pointwise Hoelder bound, n = 3, f = rho^-2, a = b = 2", k3,
         heat::convolution_bound_check(k3, {2, 0, 0}, decaying(2), heat::Clause::kA, 1.0, {0.1, 1, 10}));
    conv("heat.convolution_b", "Young bound outside B_R, f = rho^-3, a = 3/2, b = 3/2", spec,
         heat::convolution_bound_check(spec, {1.5, 0, 0.5, 1.5}, decaying(3), heat::Clause::kB, 2.0, conv_b_times));
    const heat::RadialSource bump{[](double r) { return r < 2 ? std::pow(1 - r * r / 4, 2) : 0.0; }, 0, 2, "bump"};
    conv("heat.convolution_c", "L^2 contraction of a source in B_R", spec,
         heat::convolution_bound_check(spec, {1, 0, 0, 2}, bump, heat::Clause::kC, 2.0, {0.1, 4, 400}));
  };
}

// ---------------------------------------------------------------- tensors

Runner plan_tensor(const config::KeyValues& kv, std::uint64_t seed) {
  const int n = static_cast<int>(integer(kv, "n"));
  const int metrics = static_cast<int>(integer(kv, "metrics"));
  const int levels = static_cast<int>(integer(kv, "levels"));
  const int lin = static_cast<int>(integer(kv, "linearization_cases"));
  const int pairs = static_cast<int>(integer(kv, "kato_pairs"));
  const int per_pair = static_cast<int>(integer(kv, "kato_samples"));
  const double c2 = number(kv, "c2_bound");
  guarded([&] {
    require(n >= 2 && n <= 5, "n must lie in [2, 5]");
    require(metrics >= 1 && levels >= 2 && lin >= 1 && pairs >= 1 && per_pair >= 1, "bad sample counts");
    require(c2 > 0, "c2_bound must be positive");
    return 0;
  });

  return [=](RunContext& ctx) {
    std::vector<double> spacings;
    for (int i = 0; i < levels; ++i) spacings.push_back(0.2 * std::ldexp(1.0, -i));
    const auto o = tensor::operator_oracle_study(n, metrics, seed, spacings, c2);
    std::vector<double> idx;
    for (std::size_t i = 0; i < o.orders.size(); ++i) idx.push_back(double(i));
    ctx.write_csv("oracle_orders.csv", {{"metric", idx}, {"order", o.orders}});
    ctx.check("tensor.operator_oracle_order", "ricci_deturck vs -2 Ric + L_V g converges with order >= 1.9",
              o.min_order >= 1.9, o.min_order - 1.9, {{"min_order", o.min_order}, {"max_error", o.max_error}, {"metrics", metrics}});

    const auto l = tensor::linearization_study(n, lin, seed + 1);
    ctx.write_json("linearization.json", l.to_json());
    ctx.check("tensor.linearization_flat", "one-sided quotient at g0 converges to L h with slope in [0.8, 1.2]",
              l.flat_min >= 0.8 && l.flat_max <= 1.2, std::min(l.flat_min - 0.8, 1.2 - l.flat_max),
              {{"min", l.flat_min}, {"max", l.flat_max}});
    ctx.check("tensor.linearization_general", "central quotient at random g has order in [1.8, 2.2]",
              l.general_min >= 1.8 && l.general_max <= 2.2, std::min(l.general_min - 1.8, 2.2 - l.general_max),
              {{"min", l.general_min}, {"max", l.general_max}});

    const auto k = tensor::kato_study(n, pairs, per_pair, seed + 2);
    ctx.write_json("kato.json", k.to_json());
    ctx.check("tensor.kato", "|grad h| - |grad |h|| >= -1e-10 at random points", k.min_gap >= -1e-10, k.min_gap + 1e-10,
              k.to_json());
  };
}

// ---------------------------------------------------------------- sandbox

Runner plan_ortho(const config::KeyValues& kv, std::uint64_t seed) {
  ortho::ProbeOptions po;
  po.samples = static_cast<int>(integer(kv, "probe_samples"));
  po.seed = seed;
  const auto radii = number_list(kv, "radii");
  const int systems = static_cast<int>(integer(kv, "psd_systems"));
  const int trials = static_cast<int>(integer(kv, "psd_trials"));
  const int max_dim = static_cast<int>(integer(kv, "psd_max_dim"));
  const double frac = number(kv, "lambda_fraction");
  const auto deltas = number_list(kv, "circle_deltas");
  guarded([&] {
    require(po.samples >= 20, "probe_samples must be at least 20");
    require(radii.size() >= 2, "need at least two radii");
    for (std::size_t i = 1; i < radii.size(); ++i) require(radii[i] < radii[i - 1], "radii must decrease");
    require(systems >= 1 && trials >= 1 && max_dim >= 2, "bad two-interval sample counts");
    require(frac > 0 && frac < 1, "lambda_fraction must lie in (0, 1)");
    require(!deltas.empty() && std::is_sorted(deltas.begin(), deltas.end()), "circle_deltas must increase");
    return 0;
  });

  return [=](RunContext& ctx) {
    const auto lib = ortho::map_library();
    bool valid = true;
    std::string invalid;
    for (const auto& m : lib) {
      try {
        m.validate(seed);
      } catch (const PreconditionError& e) {
        valid = false;
        invalid = e.what();
      }
    }
    ctx.check("ortho.library_valid", "library maps vanish at u0 and match their Jacobians", valid, 0,
              {{"version", ortho::kLibraryVersion}, {"error", invalid}});

    nlohmann::json reports = nlohmann::json::array();
    std::vector<double> col_int, col_slope, col_min;
    double int_margin = std::numeric_limits<double>::infinity(), non_margin = int_margin;
    bool int_ok = true, non_ok = true;
    ctx.note("map               expected        verdict                     slope    min sup");
    for (const auto& m : lib) {
      const auto r = ortho::integrability_probe(m, ortho::split(m), radii, po);
      reports.push_back(r.to_json());
      col_int.push_back(m.integrable);
      col_slope.push_back(std::isfinite(r.slope) ? r.slope : 1e300);
      col_min.push_back(r.min_sup);
      if (m.integrable) {
        int_ok = int_ok && r.verdict == ortho::Verdict::kIntegrable;
        int_margin = std::min(int_margin, r.slope - 0.8);
      } else {
        non_ok = non_ok && r.min_sup >= 0.5;
        non_margin = std::min(non_margin, r.min_sup - 0.5);
      }
      char line[160];
      std::snprintf(line, sizeof line, "%-17s %-15s %-27s %7.3f  %9.3e", m.name.c_str(),
                    m.integrable ? "integrable" : "non-integrable", ortho::to_string(r.verdict).c_str(), r.slope,
                    r.min_sup);
      ctx.note(line);
    }
    ctx.write_json("ortho_probes.json", reports);
    ctx.write_csv("ortho_maps.csv", {{"integrable", col_int}, {"slope", col_slope}, {"min_sup", col_min}});
    ctx.check("ortho.integrable_maps", "integrable maps: sup ratio decreases with slope >= 0.8", int_ok, int_margin);
    ctx.check("ortho.nonintegrable_maps", "non-integrable maps: sup ratio >= 1/2 at every radius", non_ok, non_margin);

    int passed = 0;
    double worst = 0;
    for (int i = 0; i < systems; ++i) {
      const int dim = 2 + i % (max_dim - 1);
      const auto A = ortho::random_psd(dim, std::min(i % 3, dim - 1), seed * 1000 + static_cast<std::uint64_t>(i));
      const auto r = ortho::two_interval_check(A, frac * ortho::first_positive_eigenvalue(A), trials,
                                               seed + static_cast<std::uint64_t>(i));
      passed += r.passed;
      worst = std::max(worst, r.normalized);
    }
    ctx.check("ortho.linear_two_interval", "sup_[1,2] |Au| <= e^-lambda sup_[0,1] |Au| on random PSD systems",
              passed == systems, 1 - worst, {{"systems", systems}, {"passed", passed}, {"worst_normalized", worst}});

    const auto circle = ortho::circle_potential();
    Eigen::SelfAdjointEigenSolver<ortho::Matrix> es(-circle.jacobian(circle.u0));
    const double lambda = frac * es.eigenvalues()(1);
    const auto cal = ortho::calibrate_delta(circle, lambda, deltas);
    ctx.write_json("circle_calibration.json", cal.to_json());
    const bool ok = cal.delta > 0 && ortho::nonlinear_two_interval(circle, lambda, cal.delta).passed;
    double margin = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i)
      if (deltas[i] == cal.delta) margin = 1 - cal.results[i].normalized;
    ctx.check("ortho.nonlinear_circle", "circle potential passes the two-interval test at its calibrated delta", ok,
              margin, {{"lambda", lambda}, {"delta", cal.delta}});
  };
}

}  // namespace

double number(const config::KeyValues& kv, const std::string& key) {
  return guarded([&] { return kv.number(key, std::numeric_limits<double>::quiet_NaN()); });
}

long long integer(const config::KeyValues& kv, const std::string& key) {
  return guarded([&] { return kv.integer(key, 0); });
}

std::vector<double> number_list(const config::KeyValues& kv, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_commas(kv.text(key, ""))) {
    double v = 0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || p != item.data() + item.size())
      throw ConfigError("config key '" + key + "' has a non-numeric entry: " + item);
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> text_list(const config::KeyValues& kv, const std::string& key) {
  return split_commas(kv.text(key, ""));
}

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> all = [] {
    std::vector<CommandSpec> v;
    v.push_back({"flow",
                 "radial Ricci-DeTurck flow with stability, decay, inequality, comparison and Duhamel checks",
                 {{"n", "4", "4", "4", "dimension"},
                  {"ell", "1.5", "1.5", "1.5", "decay rate of the initial data"},
                  {"ell_prime", "0.5", "0.5", "0.5", "weight exponent of the |M| estimate"},
                  {"eps", "1e-3", "1e-3", "1e-3", "weighted C0 size of h(0)"},
                  {"gamma", "0.5", "0.5", "0.5", "Hoelder exponent (recorded)"},
                  {"T", "1", "100", "100", "final time"},
                  {"cfl", "0.2", "0.2", "0.2", "time step safety factor"},
                  {"boundary", "dirichlet", "dirichlet", "dirichlet", "outer boundary condition"},
                  {"shape", "pure_trace", "pure_trace", "pure_trace", "pure_trace | traceless | bump"},
                  {"model", "rdt", "rdt", "rdt", "rdt | linear"},
                  {"nodes", "256", "160", "320", "radial nodes"},
                  {"r_max", "1e3", "1e4", "1e4", "outer radius"},
                  {"snapshots_per_decade", "16", "16", "32", "stored snapshots per time decade"},
                  {"t_first", "1e-2", "1e-2", "1e-2", "first snapshot time"},
                  {"lambda", "1.01", "1.01", "1.01", "closeness constant of the evolution inequalities"},
                  {"inequality_tolerance", "1e-6", "1e-6", "1e-6", "finite-difference tolerance"},
                  {"comparison_safety", "2", "2", "2", "factor on the calibrated comparison amplitude"},
                  {"decay_tolerance", "0.15", "0.15", "0.15", "relative tolerance on the decay exponent"},
                  {"duhamel_floor", "1e-5", "1e-5", "1e-5", "allowed negative Duhamel residual"},
                  {"duhamel_times", "2", "6", "12", "snapshots evaluated by the Duhamel check"},
                  {"duhamel_radii", "2", "4", "4", "radii per snapshot (at most 4)"},
                  {"barrier_k", "3.5", "3.5", "3.5", "comparison barrier k"},
                  {"barrier_l", "1.5", "1.5", "1.5", "comparison barrier l"},
                  {"barrier_gamma0", "0.05", "0.05", "0.05", "comparison barrier nu = n - gamma0"},
                  {"barrier_eps", "1e-2", "1e-2", "1e-2", "comparison barrier eps"}},
                 plan_flow});
    v.push_back({"barrier-verify",
                 "Kummer function and barrier F, G checks",
                 {{"n", "4", "4", "4", "dimension (mu = n)"},
                  {"k", "3.5", "3.5", "3.5", "barrier k"},
                  {"l", "1.5", "1.5", "1.5", "barrier l"},
                  {"gamma0", "0.05", "0.05", "0.05", "nu = n - gamma0"},
                  {"eps", "1e-2", "1e-2", "1e-2", "barrier eps"},
                  {"grid", "40", "200", "400", "r and t nodes of the verification grid"},
                  {"residual_samples", "200", "1000", "1000", "random (r, t) points for the heat residual"},
                  {"kummer_axis", "4", "6", "11", "points per parameter axis on [0.25, 4]"}},
                 plan_barriers});
    v.push_back({"kernel-verify",
                 "heat kernel Gaussian, gradient, weighted norm and convolution bounds",
                 {{"n", "4", "4", "4", "dimension"},
                  {"order", "1", "1", "1", "order of the cyclic group"},
                  {"samples", "200", "2000", "10000", "(x, y, t) samples"},
                  {"d_max", "100", "100", "100", "largest distance"},
                  {"t_lo", "1e-2", "1e-2", "1e-2", "smallest time"},
                  {"t_hi", "1e4", "1e4", "1e4", "largest time"},
                  {"gradient_C", "0.5", "0.5", "0.5", "gradient constant on R^n"},
                  {"a", "2", "2", "2", "L^a exponent of the weighted norm"},
                  {"alpha", "1", "1", "1", "distance weight exponent"},
                  {"beta", "1", "1", "1", "rho weight exponent"},
                  {"sweep_nt", "3", "9", "17", "time nodes of the norm sweep"},
                  {"sweep_nrho", "3", "7", "13", "rho nodes of the norm sweep"},
                  {"conv_b_times", "0.5", "0.5,5,50", "0.5,5,50,500", "times of the Young-bound check"}},
                 plan_kernel});
    v.push_back({"tensor-verify",
                 "operator oracle, linearisation and Kato checks",
                 {{"n", "4", "4", "4", "dimension"},
                  {"metrics", "5", "100", "100", "random patch metrics"},
                  {"levels", "3", "4", "5", "patch spacings 0.2, 0.1, ..."},
                  {"linearization_cases", "5", "20", "100", "random (g, h) linearisation cases"},
                  {"kato_pairs", "5", "50", "50", "random (g, h) pairs"},
                  {"kato_samples", "2000", "20000", "20000", "points per pair"},
                  {"c2_bound", "0.2", "0.2", "0.2", "bound on |g - g0|_C2"}},
                 plan_tensor});
    v.push_back({"ortho-sandbox",
                 "almost-orthogonality probes and two-interval tests",
                 {{"probe_samples", "500", "4000", "20000", "samples per radius"},
                  {"radii", "0.1,0.01,0.001", "0.1,0.01,0.001", "0.1,0.03,0.01,0.003,0.001", "probe radii"},
                  {"psd_systems", "10", "100", "100", "random PSD generators"},
                  {"psd_trials", "10", "10", "10", "initial data per generator"},
                  {"psd_max_dim", "20", "20", "20", "largest generator size"},
                  {"lambda_fraction", "0.9", "0.9", "0.9", "lambda as a fraction of the first positive eigenvalue"},
                  {"circle_deltas", "0.001,0.01,0.03,0.05,0.07,0.1,0.2", "0.001,0.003,0.01,0.02,0.03,0.05,0.07,0.1,0.2",
                   "0.001,0.003,0.01,0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.1,0.2", "delta scan of the circle potential"}},
                 plan_ortho});
    v.push_back(report_command());
    return v;
  }();
  return all;
}

const CommandSpec& find_command(const std::string& name) {
  for (const auto& c : commands())
    if (c.name == name) return c;
  throw ConfigError("unknown command '" + name + "'");
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& c : commands()) v.push_back(c.name);
    return v;
  }();
  return names;
}

const std::vector<Param>& command_params(const std::string& command) { return find_command(command).params; }

}  // namespace rdt::app
