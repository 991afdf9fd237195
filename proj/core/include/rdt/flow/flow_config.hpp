#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "rdt/config.hpp"
#include "rdt/flow/radial_flow.hpp"

namespace rdt::flow {

// Parameters of one flow run.  Keys in the text form match the field names.
struct FlowConfig {
  int n = 4;
  double ell = 1.5;        // decay rate of the initial data
  double ell_prime = 0.5;  // weight exponent in the |M| estimate
  double eps = 1e-3;       // ‖h(0)‖ in C⁰ with weight ρ^ℓ
  double gamma = 0.5;      // Hölder exponent of the norms (recorded)
  double T = 100;
  double cfl = 0.2;
  std::string boundary = "dirichlet";
  std::string shape = "pure_trace";  // pure_trace | traceless | bump
  std::string model = "rdt";         // rdt | linear
  std::uint64_t seed = 0;
  int nodes = 160;
  double r_max = 1e4;
  int snapshots_per_decade = 16;
  double t_first = 1e-2;

  void validate() const;
  static FlowConfig from_key_values(const config::KeyValues& kv);
  static FlowConfig parse(const std::string& text);
  // Canonical "key = value" text; parse(to_text()) reproduces the config.
  std::string to_text() const;
  nlohmann::json to_json() const;
  Model flow_model() const;
};

std::shared_ptr<const grid::RadialGrid> make_grid(const FlowConfig& c);
// Initial data normalised so that sup ρ^ℓ |h(0)| = ε.
RadialFlowState initial_state(const FlowConfig& c, std::shared_ptr<const grid::RadialGrid> grid);
// Shape profiles (a − 1, b − 1) for unit amplitude.
double shape_a(const FlowConfig& c, double r);
double shape_b(const FlowConfig& c, double r);

}  // namespace rdt::flow
