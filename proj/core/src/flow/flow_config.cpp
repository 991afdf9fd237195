#include "rdt/flow/flow_config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rdt/io.hpp"
#include "rdt/tensor/metrics.hpp"

namespace rdt::flow {

namespace {

const std::vector<std::string> kKeys = {"n",     "ell",   "ell_prime", "eps",   "gamma", "T",
                                        "cfl",   "boundary", "shape", "model", "seed",  "nodes",
                                        "r_max", "snapshots_per_decade", "t_first"};

constexpr double kBumpRadius = 2.0;

// sup over r of ρ^ℓ·bump(r/R), computed once on a fine sample.
double bump_weight_peak(double ell) {
  double m = 0;
  for (int i = 0; i <= 20000; ++i) {
    const double r = kBumpRadius * i / 20000.0;
    m = std::max(m, std::pow(1 + r * r, ell / 2) * tensor::smooth_bump(r / kBumpRadius));
  }
  return m;
}

}  // namespace

void FlowConfig::validate() const {
  require(n >= 3 && n <= 16, "n out of range");
  require(ell > 1 && ell < n - 2, "decay rate needs 1 < ℓ < n − 2");
  // The lower end is admitted with equality; fits report when it is attained.
  require(ell_prime >= std::max(0.0, 2 - ell) && ell_prime > 0 && ell_prime < ell,
          "weight exponent needs max(0, 2 − ℓ) ≤ ℓ′ < ℓ");
  require(eps >= 0 && std::isfinite(eps), "ε must be finite and non-negative");
  require(gamma > 0 && gamma < 1, "Hölder exponent must lie in (0, 1)");
  require(T > 0 && std::isfinite(T), "final time must be positive");
  require(cfl > 0 && cfl <= 1, "CFL factor must lie in (0, 1]");
  require(boundary == "dirichlet", "only the dirichlet boundary rule is supported");
  require(shape == "pure_trace" || shape == "traceless" || shape == "bump", "unknown initial shape '" + shape + "'");
  require(model == "rdt" || model == "linear", "unknown model '" + model + "'");
  require(nodes >= 64, "at least 64 radial nodes");
  require(r_max >= 10 * std::sqrt(T), "r_max must be at least 10√T");
  require(snapshots_per_decade >= 1, "snapshots per decade must be positive");
  require(t_first > 0 && t_first < T, "first snapshot must lie in (0, T)");
}

FlowConfig FlowConfig::from_key_values(const config::KeyValues& kv) {
  kv.require_known(kKeys);
  FlowConfig c;
  c.n = static_cast<int>(kv.integer("n", c.n));
  c.ell = kv.number("ell", c.ell);
  c.ell_prime = kv.number("ell_prime", c.ell_prime);
  c.eps = kv.number("eps", c.eps);
  c.gamma = kv.number("gamma", c.gamma);
  c.T = kv.number("T", c.T);
  c.cfl = kv.number("cfl", c.cfl);
  c.boundary = kv.text("boundary", c.boundary);
  c.shape = kv.text("shape", c.shape);
  c.model = kv.text("model", c.model);
  const long long seed = kv.integer("seed", 0);
  require(seed >= 0, "seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.nodes = static_cast<int>(kv.integer("nodes", c.nodes));
  c.r_max = kv.number("r_max", c.r_max);
  c.snapshots_per_decade = static_cast<int>(kv.integer("snapshots_per_decade", c.snapshots_per_decade));
  c.t_first = kv.number("t_first", c.t_first);
  c.validate();
  return c;
}

FlowConfig FlowConfig::parse(const std::string& text) { return from_key_values(config::KeyValues::parse(text)); }

std::string FlowConfig::to_text() const {
  using io::format_double;
  std::ostringstream s;
  s << "n = " << n << "\nell = " << format_double(ell) << "\nell_prime = " << format_double(ell_prime)
    << "\neps = " << format_double(eps) << "\ngamma = " << format_double(gamma) << "\nT = " << format_double(T)
    << "\ncfl = " << format_double(cfl) << "\nboundary = " << boundary << "\nshape = " << shape << "\nmodel = " << model
    << "\nseed = " << seed << "\nnodes = " << nodes << "\nr_max = " << format_double(r_max)
    << "\nsnapshots_per_decade = " << snapshots_per_decade << "\nt_first = " << format_double(t_first) << "\n";
  return s.str();
}

nlohmann::json FlowConfig::to_json() const {
  return {{"n", n},         {"ell", ell},     {"ell_prime", ell_prime}, {"eps", eps},       {"gamma", gamma},
          {"T", T},         {"cfl", cfl},     {"boundary", boundary},   {"shape", shape},   {"model", model},
          {"seed", seed},   {"nodes", nodes}, {"r_max", r_max},         {"snapshots_per_decade", snapshots_per_decade},
          {"t_first", t_first}};
}

Model FlowConfig::flow_model() const { return model == "linear" ? Model::kLinearHeat : Model::kRicciDeTurck; }

std::shared_ptr<const grid::RadialGrid> make_grid(const FlowConfig& c) {
  c.validate();
  return std::make_shared<const grid::RadialGrid>(c.n, c.nodes, c.r_max);
}

double shape_a(const FlowConfig& c, double r) {
  const double s = 1 + r * r, n = c.n, m = n - 1;
  if (c.shape == "pure_trace") return std::pow(s, -c.ell / 2) / std::sqrt(n);
  if (c.shape == "traceless") return std::sqrt(m / n) * r * r * std::pow(s, -c.ell / 2 - 1);
  static thread_local double cached_ell = -1, peak = 0;
  if (cached_ell != c.ell) {
    peak = bump_weight_peak(c.ell);
    cached_ell = c.ell;
  }
  return tensor::smooth_bump(r / kBumpRadius) / (std::sqrt(n) * peak);
}

double shape_b(const FlowConfig& c, double r) {
  if (c.shape == "traceless") return -shape_a(c, r) / (c.n - 1);
  return shape_a(c, r);
}

RadialFlowState initial_state(const FlowConfig& c, std::shared_ptr<const grid::RadialGrid> grid) {
  c.validate();
  RadialFlowState s = RadialFlowState::flat(std::move(grid));
  for (int i = 0; i + 1 < s.size(); ++i) {
    const double r = s.grid->r(i);
    s.a[static_cast<std::size_t>(i)] = 1 + c.eps * shape_a(c, r);
    s.b[static_cast<std::size_t>(i)] = 1 + c.eps * shape_b(c, r);
  }
  s.validate();
  return s;
}

}  // namespace rdt::flow
