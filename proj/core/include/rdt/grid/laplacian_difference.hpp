#pragma once

#include <vector>

#include "rdt/grid/radial_grid.hpp"
#include "rdt/tensor/patch_fields.hpp"

namespace rdt::grid {

struct LaplacianDifference {
  std::vector<double> r;
  std::vector<double> residual;  // |(Δ_{g0} − Δ_Euc) h|
  std::vector<double> scale;     // ρ^{−τ}|∇²h| + ρ^{−τ−1}|∇h| + ρ^{−τ−2}|h|
  std::vector<double> ratio;     // residual / scale (0 where scale vanishes)
  double max_ratio = 0;
};

// Evaluates both rough Laplacians of h along the ray through `direction`, at
// the grid nodes with r in [r_lo, r_hi].  Coordinates at infinity are the
// identity chart, so Δ_Euc acts componentwise.
LaplacianDifference laplacian_difference_residual(const tensor::MetricFn& g0, double tau, const tensor::MetricFn& h,
                                                  const RadialGrid& grid, const Vec& direction, double r_lo,
                                                  double r_hi, double fd_step = 1e-3);

}  // namespace rdt::grid
