#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "rdt/tensor/small.hpp"

namespace rdt::grid {

using tensor::Vec;

// Uniform tensor-product grid on the cube center ± half_width.
class CartesianPatch {
 public:
  CartesianPatch(int n_dim, const Vec& center, double half_width, int resolution);

  int dim() const { return n_; }
  int resolution() const { return res_; }
  double half_width() const { return half_width_; }
  double spacing() const { return h_; }
  const Vec& center() const { return center_; }
  std::size_t node_count() const { return count_; }

  std::size_t index(const std::array<int, tensor::kMaxDim>& multi) const;
  std::array<int, tensor::kMaxDim> multi_index(std::size_t node) const;
  Vec point(std::size_t node) const;
  std::size_t center_node() const;
  // Distance (in nodes) from the node to the nearest face.
  int margin(std::size_t node) const;
  // Node offset by `steps` along `axis`; caller guarantees it stays inside.
  std::size_t shifted(std::size_t node, int axis, int steps) const {
    return static_cast<std::size_t>(static_cast<long long>(node) + steps * static_cast<long long>(stride_[axis]));
  }

 private:
  int n_;
  Vec center_;
  double half_width_;
  int res_;
  double h_;
  std::size_t count_;
  std::array<std::size_t, tensor::kMaxDim> stride_{};
};

// Fourth-order central stencils on a patch, acting on flat per-node arrays with
// `ncomp` components.  Require margin ≥ 2 at the node.
void fd_first(const CartesianPatch& p, const std::vector<double>& f, int ncomp, std::size_t node, int axis,
              double* out);
void fd_second(const CartesianPatch& p, const std::vector<double>& f, int ncomp, std::size_t node, int a, int b,
               double* out);

}  // namespace rdt::grid
