#include "rdt/grid/laplacian_difference.hpp"

#include <algorithm>
#include <cmath>

#include "rdt/common.hpp"

namespace rdt::grid {

LaplacianDifference laplacian_difference_residual(const tensor::MetricFn& g0, double tau, const tensor::MetricFn& h,
                                                  const RadialGrid& grid, const Vec& direction, double r_lo,
                                                  double r_hi, double fd_step) {
  const int n = grid.dim();
  double len = 0;
  for (int i = 0; i < n; ++i) len += direction[i] * direction[i];
  require(len > 0, "direction must be nonzero");
  len = std::sqrt(len);
  LaplacianDifference out;
  for (double r : grid.nodes()) {
    if (r < r_lo || r > r_hi) continue;
    Vec x{};
    for (int i = 0; i < n; ++i) x[i] = r * direction[i] / len;
    const tensor::SymJet gj = tensor::point_jet(g0, x, n, fd_step);
    const tensor::SymJet hj = tensor::point_jet(h, x, n, fd_step);
    const tensor::Background bg = tensor::make_background(gj);
    const tensor::CovJet cov = tensor::covariant(hj, bg);
    const tensor::Mat lap0 = tensor::rough_laplacian(bg.conn.ginv, cov, n);
    double res = 0, h0 = 0, h1 = 0, h2 = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double le = 0;
        for (int a = 0; a < n; ++a) {
          le += hj.dd[a][a][i][j];
          h1 += hj.d[a][i][j] * hj.d[a][i][j];
          for (int b = 0; b < n; ++b) h2 += hj.dd[a][b][i][j] * hj.dd[a][b][i][j];
        }
        res += (lap0[i][j] - le) * (lap0[i][j] - le);
        h0 += hj.v[i][j] * hj.v[i][j];
      }
    const double w = rho(r);
    const double scale = std::pow(w, -tau) * std::sqrt(h2) + std::pow(w, -tau - 1) * std::sqrt(h1) +
                         std::pow(w, -tau - 2) * std::sqrt(h0);
    out.r.push_back(r);
    out.residual.push_back(std::sqrt(res));
    out.scale.push_back(scale);
    const double q = scale > 0 ? std::sqrt(res) / scale : 0.0;
    out.ratio.push_back(q);
    out.max_ratio = std::max(out.max_ratio, q);
  }
  return out;
}

}  // namespace rdt::grid
