#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdt/ortho/toy_map.hpp"

namespace rdt::ortho {

// sup_{[1,2]} ‖M(u)‖ ≤ e^{−λ} sup_{[0,1]} ‖M(u)‖ along u′ = M(u).
struct TwoIntervalResult {
  double lambda = 0;
  double lambda1 = 0;     // first positive eigenvalue (linear case)
  double worst_ratio = 0; // max of sup₂/sup₁ over the non-vacuous trials
  double normalized = 0;  // worst_ratio / e^{−λ}
  int trials = 0;
  int vacuous = 0;        // trials with both suprema zero
  bool passed = false;
  std::string breakdown;  // nonlinear case: why an integration stopped
  nlohmann::json to_json() const;
};

// u′ = −Au solved through the eigendecomposition of A.  Requires A symmetric
// positive semidefinite and λ < λ₁.
TwoIntervalResult two_interval_check(const Matrix& A, double lambda, const std::vector<Vector>& initial);
TwoIntervalResult two_interval_check(const Matrix& A, double lambda, int trials, std::uint64_t seed);
double first_positive_eigenvalue(const Matrix& A);
// Random PSD matrix of the given size with a kernel of the given dimension.
Matrix random_psd(int dim, int nullity, std::uint64_t seed);

struct NonlinearOptions {
  int directions = 16;   // starts on the sphere of radius δ and on half of it
  int steps_per_unit = 200;
};
// RK4 integration of u′ = M(u) from points with ‖u(0) − u₀‖ ≤ δ.
TwoIntervalResult nonlinear_two_interval(const ToyMap& map, double lambda, double delta, const NonlinearOptions& o = {});
TwoIntervalResult nonlinear_two_interval(const ToyMap& map, double lambda, const std::vector<Vector>& initial,
                                         const NonlinearOptions& o = {});

struct DeltaCalibration {
  double lambda = 0;
  double delta = 0;  // largest δ of the scan passing with every smaller one; 0 if none
  std::vector<double> deltas;
  std::vector<TwoIntervalResult> results;
  nlohmann::json to_json() const;
};
// Scans δ in increasing order.
DeltaCalibration calibrate_delta(const ToyMap& map, double lambda, const std::vector<double>& deltas,
                                 const NonlinearOptions& o = {});

}  // namespace rdt::ortho
