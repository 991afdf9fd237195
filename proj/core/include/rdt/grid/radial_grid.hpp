#pragma once

#include <span>
#include <string>
#include <vector>

#include "rdt/tensor/small.hpp"

namespace rdt::grid {

using tensor::Vec;

// Regularised distance to the base point (the origin): √(1 + d²).
double rho(double dist);
double rho(const tensor::Vec& x, int n);

// Volume of the unit sphere S^{n−1}.
double sphere_area(int n);

enum class Parity { kEven, kNone };

// Radial nodes r = sinh(ξ) with ξ uniform: near-uniform for r ≲ 1 and
// logarithmic beyond.
class RadialGrid {
 public:
  RadialGrid(int n_dim, int count, double r_max, double r_min = 0.0, int gamma_order = 1);

  int dim() const { return n_; }
  int gamma_order() const { return gamma_order_; }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  double r(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  double xi(int i) const { return xi0_ + i * dxi_; }
  double xi_of(double r) const;
  double dxi() const { return dxi_; }
  double min_spacing() const;
  // |S^{n−1}| / |Γ|.
  double shell_factor() const { return sphere_area(n_) / gamma_order_; }
  int index_at_or_above(double r) const;

  // Radial derivatives f', f''.  Even parity uses reflected ghost nodes at
  // r = 0 (requires r_min = 0).
  void derivatives(std::span<const double> f, std::vector<double>& d1, std::vector<double>& d2,
                   Parity parity = Parity::kEven) const;

 private:
  int n_;
  int gamma_order_;
  double r_min_, r_max_;
  double xi0_, dxi_;
  std::vector<double> nodes_;
};

struct ScalarProfile {
  std::vector<double> values;
};

// Components in the radial frame (e.g. the rr and tangential parts).
struct TensorProfile {
  std::vector<std::string> names;
  std::vector<std::vector<double>> components;
};

void validate_profile(const RadialGrid& grid, const ScalarProfile& p);
void validate_profile(const RadialGrid& grid, const TensorProfile& p);

// Cubic B-spline interpolant of a profile in the ξ coordinate.
class ProfileInterpolant {
 public:
  ProfileInterpolant(const RadialGrid& grid, std::span<const double> values);
  ~ProfileInterpolant();
  ProfileInterpolant(ProfileInterpolant&&) noexcept;
  ProfileInterpolant& operator=(ProfileInterpolant&&) noexcept;
  double operator()(double r) const;
  double derivative(double r) const;

 private:
  struct Impl;
  Impl* impl_;
  double r_lo_, r_hi_;
};

}  // namespace rdt::grid
