#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdt/flow/flow_config.hpp"
#include "rdt/io.hpp"

namespace rdt::flow {

// One row per snapshot.  Norms are taken with respect to g0.
struct DiagnosticsRow {
  double t = 0;
  double sup_h = 0;           // sup |h|
  double weighted_h = 0;      // sup ρ^ℓ |h|
  double sup_m = 0;           // sup |M|
  double ball_m = 0;          // sup over |x| ≤ √t of ρ^ℓ′ |M|
  double boundary_ratio = 0;  // |h(r_max/2)| / sup |h|
  double lambda = 1;          // smallest λ with λ⁻²g0 ≤ g ≤ λ²g0
  long long steps = 0;        // time steps taken so far
};

// Snapshots with the state, its velocity M = ∂t g and diagnostics.
struct Trajectory {
  FlowConfig config;
  std::vector<double> times;
  std::vector<RadialFlowState> states;
  std::vector<RadialRhs> rates;
  std::vector<DiagnosticsRow> diagnostics;
  bool completed = false;
  std::string breakdown;  // empty unless the run stopped early
  long long steps = 0;

  const grid::RadialGrid& grid() const { return *states.front().grid; }
  std::size_t size() const { return times.size(); }
};

// Snapshot times in (t0, t0 + duration]: log-spaced from t_first with the
// configured density, always including the end point.
std::vector<double> snapshot_times(const FlowConfig& c, double t0, double duration);
// Effective explicit step: the CFL bound scaled by 2/n for the nΔ stencil at the origin.
double run_dt(const FlowConfig& c, const RadialFlowState& s);

Trajectory run(const FlowConfig& c);
// Continues from `initial` for `duration`; the first snapshot is the initial state.
Trajectory run_from(const FlowConfig& c, const RadialFlowState& initial, double duration);

DiagnosticsRow diagnose(const FlowConfig& c, const RadialFlowState& s, const RadialRhs& m);
double norm_h(int n, double ha, double hb);

// Long-format table t, r, a, b, |M|.
std::vector<io::Column> trajectory_columns(const Trajectory& tr);
std::vector<io::Column> diagnostics_columns(const Trajectory& tr);

}  // namespace rdt::flow
