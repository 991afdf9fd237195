#include "rdt/grid/cartesian_patch.hpp"

#include <algorithm>

#include "rdt/common.hpp"

namespace rdt::grid {

CartesianPatch::CartesianPatch(int n_dim, const Vec& center, double half_width, int resolution)
    : n_(n_dim), center_(center), half_width_(half_width), res_(resolution) {
  require(n_dim >= 1 && n_dim <= tensor::kMaxDim, "patch dimension out of range");
  require(resolution >= 5 && resolution % 2 == 1, "patch resolution must be odd and at least 5");
  require(half_width > 0, "patch half-width must be positive");
  h_ = 2.0 * half_width / (resolution - 1);
  count_ = 1;
  for (int a = n_ - 1; a >= 0; --a) {
    stride_[a] = count_;
    count_ *= static_cast<std::size_t>(res_);
  }
}

std::size_t CartesianPatch::index(const std::array<int, tensor::kMaxDim>& multi) const {
  std::size_t k = 0;
  for (int a = 0; a < n_; ++a) k += static_cast<std::size_t>(multi[a]) * stride_[a];
  return k;
}

std::array<int, tensor::kMaxDim> CartesianPatch::multi_index(std::size_t node) const {
  std::array<int, tensor::kMaxDim> m{};
  for (int a = 0; a < n_; ++a) {
    m[a] = static_cast<int>(node / stride_[a]);
    node %= stride_[a];
  }
  return m;
}

Vec CartesianPatch::point(std::size_t node) const {
  const auto m = multi_index(node);
  Vec x{};
  for (int a = 0; a < n_; ++a) x[a] = center_[a] - half_width_ + h_ * m[a];
  return x;
}

std::size_t CartesianPatch::center_node() const {
  std::array<int, tensor::kMaxDim> m{};
  for (int a = 0; a < n_; ++a) m[a] = res_ / 2;
  return index(m);
}

int CartesianPatch::margin(std::size_t node) const {
  const auto m = multi_index(node);
  int best = res_;
  for (int a = 0; a < n_; ++a) best = std::min({best, m[a], res_ - 1 - m[a]});
  return best;
}

// Stencils are written in difference form so constants differentiate to exactly 0.
void fd_first(const CartesianPatch& p, const std::vector<double>& f, int ncomp, std::size_t node, int axis,
              double* out) {
  const std::size_t nc = static_cast<std::size_t>(ncomp);
  const std::size_t m2 = p.shifted(node, axis, -2) * nc, m1 = p.shifted(node, axis, -1) * nc;
  const std::size_t p1 = p.shifted(node, axis, 1) * nc, p2 = p.shifted(node, axis, 2) * nc;
  const double den = 12.0 * p.spacing();
  for (std::size_t c = 0; c < nc; ++c) out[c] = (8.0 * (f[p1 + c] - f[m1 + c]) - (f[p2 + c] - f[m2 + c])) / den;
}

void fd_second(const CartesianPatch& p, const std::vector<double>& f, int ncomp, std::size_t node, int a, int b,
               double* out) {
  const std::size_t nc = static_cast<std::size_t>(ncomp);
  const double h2 = p.spacing() * p.spacing();
  if (a == b) {
    const std::size_t z = node * nc;
    const std::size_t m2 = p.shifted(node, a, -2) * nc, m1 = p.shifted(node, a, -1) * nc;
    const std::size_t p1 = p.shifted(node, a, 1) * nc, p2 = p.shifted(node, a, 2) * nc;
    for (std::size_t c = 0; c < nc; ++c) {
      const double f0 = f[z + c];
      out[c] = (16.0 * ((f[p1 + c] - f0) + (f[m1 + c] - f0)) - ((f[p2 + c] - f0) + (f[m2 + c] - f0))) / (12.0 * h2);
    }
    return;
  }
  constexpr std::size_t kMaxComp = tensor::kMaxDim * tensor::kMaxDim * tensor::kMaxDim;
  require(nc <= kMaxComp, "too many components for a mixed derivative");
  std::array<double, 4 * kMaxComp> inner;
  static constexpr int kOff[4] = {-2, -1, 1, 2};
  for (int s = 0; s < 4; ++s) fd_first(p, f, ncomp, p.shifted(node, a, kOff[s]), b, inner.data() + s * nc);
  const double den = 12.0 * p.spacing();
  for (std::size_t c = 0; c < nc; ++c)
    out[c] = (8.0 * (inner[2 * nc + c] - inner[nc + c]) - (inner[3 * nc + c] - inner[c])) / den;
}

}  // namespace rdt::grid
