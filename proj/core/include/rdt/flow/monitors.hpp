#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdt/barriers/barriers.hpp"
#include "rdt/flow/trajectory.hpp"

namespace rdt::flow {

// Decay of |M| along a trajectory.
//   temporal: slope of log sup_{|x|≤√t} ρ^ℓ′|M| against log(1 + t), i.e. the
//             parabolic scale ρ(0)² + t of the target bound;
//   joint:    least squares log|M| ≈ c − s log ρ − p log(ρ² + t) over r ≤ 10√t.
struct DecayFit {
  double t_lo = 0, t_hi = 0;
  int snapshots = 0;
  double temporal_exponent = 0, temporal_target = 0, temporal_residual = 0;
  double temporal_exponent_plain_t = 0;  // same fit against log t
  double spatial_exponent = 0, spatial_target = 0;
  double parabolic_exponent = 0, parabolic_target = 0, joint_residual = 0;
  double h_weighted_sup = 0;      // sup_t sup_x ρ^ℓ|h|
  double h_weighted_initial = 0;  // same at the first snapshot
  bool ell_prime_on_boundary = false;
  nlohmann::json to_json() const;
};
DecayFit fit_m_decay(const Trajectory& tr, double ell, double ell_prime, double t_lo = 1.0, double t_hi = -1.0);

// Pointwise residuals of the |h|^q and |M|^q evolution inequalities; both are
// ≤ 0 in exact arithmetic.  Evaluated on r ≤ r_max/2.
struct InequalitySnapshot {
  double t = 0;
  double max_h = 0, max_h_relative = 0;  // positive parts; relative to the size of the terms
  double max_m = 0, max_m_relative = 0;
  double worst_r_h = 0, worst_r_m = 0;
};
struct InequalityReport {
  double q = 2, lambda = 1.01;
  bool applicable = true;  // λ-closeness and the smallness of |h| held at every snapshot
  std::string reason;
  double tolerance = 1e-6;
  double max_h = 0, max_m = 0, max_h_relative = 0, max_m_relative = 0;
  std::vector<InequalitySnapshot> snapshots;
  bool passed() const { return applicable && max_h <= tolerance && max_m <= tolerance; }
  nlohmann::json to_json() const;
};
InequalityReport evolution_inequality_margin(const Trajectory& tr, double q, double lambda, double tolerance = 1e-6);

// |M|^q < A^q G on the monitored region r ≤ r_max/4 at every snapshot.
struct ComparisonReport {
  enum class Status { kClean, kPreconditionFailure, kInteriorViolation };
  Status status = Status::kClean;
  double A = 0, q = 2;
  std::vector<double> times;
  std::vector<double> margins;           // min over the region of A^q G − |M|^q
  std::vector<double> relative_margins;  // min of 1 − |M|^q / (A^q G)
  double violation_t = 0, violation_r = 0;
  std::string message;
  nlohmann::json to_json() const;
};
ComparisonReport comparison_monitor(const Trajectory& tr, const barriers::BarrierSpec& barrier, double A, double q = 2);
// Smallest A with |M(·,0)|^q ≤ A^q G(·,0) on the region, times `safety`.
double calibrate_comparison_amplitude(const Trajectory& tr, const barriers::BarrierSpec& barrier, double q, double safety);

std::string to_string(ComparisonReport::Status s);

}  // namespace rdt::flow
