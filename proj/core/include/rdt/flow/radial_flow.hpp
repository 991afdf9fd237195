#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rdt/common.hpp"
#include "rdt/grid/radial_grid.hpp"
#include "rdt/tensor/patch_fields.hpp"

namespace rdt::flow {

// Raised when the metric leaves the positive cone or stops being finite.
class FlowBreakdown : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// g = a(r) dr² + b(r) r² ĝ on ℝⁿ, flat reference g0 = dr² + r² ĝ.
struct RadialFlowState {
  std::shared_ptr<const grid::RadialGrid> grid;
  std::vector<double> a, b;
  double time = 0;

  static RadialFlowState flat(std::shared_ptr<const grid::RadialGrid> grid);
  int size() const { return static_cast<int>(a.size()); }
  // Positivity, finiteness, a(0) = b(0) and a = b = 1 at r_max.
  void validate() const;
};

// Radial profiles with their first and second r-derivatives at one node.
struct RadialData {
  double a = 1, a1 = 0, a2 = 0;
  double b = 1, b1 = 0, b2 = 0;
};

// (∂t a, ∂t b) of the Ricci-DeTurck flow at radius r; r = 0 uses the regular limit.
struct RadialRate {
  double da = 0, db = 0;
};
RadialRate reduced_rhs_point(int n, double r, const RadialData& d);
// Linear part at the flat metric: the componentwise Laplacian of h.
RadialRate linear_rhs_point(int n, double r, const RadialData& d);

enum class Model { kRicciDeTurck, kLinearHeat };

struct RadialRhs {
  std::vector<double> da, db;
};
RadialRhs reduced_rhs(const RadialFlowState& s, Model model = Model::kRicciDeTurck);
// Profiles and their derivatives at every node.
std::vector<RadialData> radial_data(const RadialFlowState& s);

// Cartesian 2-jet at x = r e₁ of the tensor A dr² + B r² ĝ with the given
// radial derivatives; the r = 0 limit needs A(0) = B(0).
tensor::SymJet cartesian_jet(int n, double r, const RadialData& d);
// Cartesian metric function of a radial profile given by closures.
tensor::MetricFn radial_metric_fn(int n, std::function<double(double)> a, std::function<double(double)> b);

// Largest admissible explicit step cfl·h_min²·min(a, b).
double max_stable_dt(const RadialFlowState& s, double cfl);
// One explicit midpoint (RK2) step; dt must not exceed max_stable_dt.
RadialFlowState step(const RadialFlowState& s, double dt, double cfl, Model model = Model::kRicciDeTurck);

}  // namespace rdt::flow
