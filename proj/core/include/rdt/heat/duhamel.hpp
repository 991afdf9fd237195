#pragma once

#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdt/flow/trajectory.hpp"
#include "rdt/grid/radial_grid.hpp"

namespace rdt::heat {

// Stored snapshots of a radial |h|_{g0} on ℝⁿ.
struct RadialHistory {
  int n = 4;
  std::shared_ptr<const grid::RadialGrid> grid;
  std::vector<double> times;
  std::vector<std::vector<double>> h;  // |h| at the grid nodes
  double lambda = 1;                   // λ⁻²g0 ≤ g ≤ λ²g0 over the history
  double rm0 = 0;                      // sup |Rm(g0)|

  void validate() const;
  // Snapshots per time decade over (t₁, t_last], t₁ the first positive time.
  double density() const;
};
RadialHistory history_from_trajectory(const flow::Trajectory& tr);
// Pure-trace h = u g0 with u = A (1 + 4t/w²)^{−n/2} e^{−r²/(w² + 4t)}, the
// heat evolution of A e^{−r²/w²}.
RadialHistory embedded_heat_history(std::shared_ptr<const grid::RadialGrid> grid, double amplitude, double width,
                                    std::vector<double> times);

// Constants of the inequality
//   |h|^q(x,t) ≤ ∫H|h₀|^q + C ∫∫ H (|Rm||h|^q + (1/√τ + d/τ)|h|^{q/2+1}|∇|h|^{q/2}| − c|∇|h|^{q/2}|²)
// with τ = t − s.  They follow from the |h|^q evolution inequality, the flat
// gradient bound |∇H| ≤ (d/2τ)H and |g⁻¹ − g0⁻¹| ≤ λ²|h|.
struct DuhamelConstants {
  double C = 0, c = 0;
  nlohmann::json to_json() const;
};
DuhamelConstants duhamel_constants(double q, double lambda);

struct DuhamelOptions {
  int max_times = 6;              // evaluation snapshots, log-spread over the history
  int radii = 4;                  // |x| ∈ {0, √t, 3√t, 10√t} ∩ [0, r_cap]
  double r_cap_fraction = 0.25;   // r_cap = fraction · r_max
  double min_density = 16;        // snapshots per decade
};

struct DuhamelSample {
  double t = 0, r = 0;
  double lhs = 0, initial = 0, source = 0;
  double residual = 0;   // initial + source − lhs
  double tolerance = 0;  // time-quadrature error estimate
  double relative = 0;   // residual / max(lhs, initial)
};
struct DuhamelReport {
  double q = 2;
  DuhamelConstants constants;
  std::vector<DuhamelSample> samples;
  std::vector<double> snapshot_times, snapshot_min_residual;
  double min_residual = 0, min_relative = 0, max_tolerance = 0;
  bool passed(double floor = 0) const;  // residual ≥ −(tolerance + floor) at every sample
  nlohmann::json to_json() const;
};
// Throws PreconditionError when q ≤ 1, the snapshot density is insufficient or
// |h| is too large for the inequality to apply.
DuhamelReport duhamel_residual(const RadialHistory& hist, double q, const DuhamelOptions& o = {});

}  // namespace rdt::heat
