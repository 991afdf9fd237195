#include "rdt/grid/radial_grid.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>

#include "rdt/common.hpp"

namespace rdt::grid {

double rho(double dist) { return std::sqrt(1.0 + dist * dist); }

double rho(const tensor::Vec& x, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i];
  return std::sqrt(1.0 + s);
}

double sphere_area(int n) { return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n); }

RadialGrid::RadialGrid(int n_dim, int count, double r_max, double r_min, int gamma_order)
    : n_(n_dim), gamma_order_(gamma_order), r_min_(r_min), r_max_(r_max) {
  require(n_dim >= 3, "ambient dimension must be at least 3");
  require(gamma_order >= 1, "group order must be positive");
  require(count >= 64, "radial grid needs at least 64 nodes");
  require(r_min >= 0 && r_max > r_min, "radial grid bounds out of order");
  require(r_min == 0.0 || r_max > 10.0 * r_min, "r_max must exceed 10·r_min");
  xi0_ = std::asinh(r_min);
  dxi_ = (std::asinh(r_max) - xi0_) / (count - 1);
  nodes_.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) nodes_[static_cast<std::size_t>(i)] = std::sinh(xi0_ + i * dxi_);
  nodes_.front() = r_min;
  nodes_.back() = r_max;
}

double RadialGrid::xi_of(double r) const { return std::asinh(r); }

double RadialGrid::min_spacing() const {
  double h = nodes_[1] - nodes_[0];
  for (std::size_t i = 1; i + 1 < nodes_.size(); ++i) h = std::min(h, nodes_[i + 1] - nodes_[i]);
  return h;
}

int RadialGrid::index_at_or_above(double r) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), r);
  return static_cast<int>(it - nodes_.begin());
}

void RadialGrid::derivatives(std::span<const double> f, std::vector<double>& d1, std::vector<double>& d2,
                             Parity parity) const {
  const int N = size();
  require(static_cast<int>(f.size()) == N, "profile length does not match grid");
  const bool even = parity == Parity::kEven && r_min_ == 0.0;
  d1.assign(static_cast<std::size_t>(N), 0.0);
  d2.assign(static_cast<std::size_t>(N), 0.0);
  auto F = [&](int i) { return f[static_cast<std::size_t>(i < 0 ? -i : i)]; };
  const double h = dxi_, h2 = dxi_ * dxi_;
  for (int i = 0; i < N; ++i) {
    double fx, fxx;
    // Differences against F(i) so constant profiles give exact zeros.
    auto D = [&](int j) { return F(j) - F(i); };
    if ((i >= 2 && i <= N - 3) || (i < 2 && even)) {
      fx = (8 * (F(i + 1) - F(i - 1)) - (F(i + 2) - F(i - 2))) / (12 * h);
      fxx = (16 * (D(i + 1) + D(i - 1)) - (D(i + 2) + D(i - 2))) / (12 * h2);
    } else if (i == 0) {
      fx = (4 * D(1) - D(2)) / (2 * h);
      fxx = (-5 * D(1) + 4 * D(2) - D(3)) / h2;
    } else if (i == N - 1) {
      fx = -(4 * D(i - 1) - D(i - 2)) / (2 * h);
      fxx = (-5 * D(i - 1) + 4 * D(i - 2) - D(i - 3)) / h2;
    } else {
      fx = (F(i + 1) - F(i - 1)) / (2 * h);
      fxx = (D(i + 1) + D(i - 1)) / h2;
    }
    const double xi = xi0_ + i * h;
    const double rx = std::cosh(xi), rxx = std::sinh(xi);
    d1[static_cast<std::size_t>(i)] = fx / rx;
    d2[static_cast<std::size_t>(i)] = (fxx - fx * rxx / rx) / (rx * rx);
  }
  if (even) d1[0] = 0.0;
}

void validate_profile(const RadialGrid& grid, const ScalarProfile& p) {
  require(static_cast<int>(p.values.size()) == grid.size(), "profile length does not match grid");
  for (double v : p.values) require(std::isfinite(v), "profile contains non-finite values");
}

void validate_profile(const RadialGrid& grid, const TensorProfile& p) {
  require(p.names.size() == p.components.size(), "component names do not match components");
  for (const auto& c : p.components) validate_profile(grid, ScalarProfile{c});
}

struct ProfileInterpolant::Impl {
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};

ProfileInterpolant::ProfileInterpolant(const RadialGrid& grid, std::span<const double> values)
    : impl_(nullptr), r_lo_(grid.r_min()), r_hi_(grid.r_max()) {
  require(static_cast<int>(values.size()) == grid.size(), "profile length does not match grid");
  impl_ = new Impl{boost::math::interpolators::cardinal_cubic_b_spline<double>(
      values.begin(), values.end(), grid.xi(0), grid.dxi(), 0.0)};
}

ProfileInterpolant::~ProfileInterpolant() { delete impl_; }
ProfileInterpolant::ProfileInterpolant(ProfileInterpolant&& o) noexcept : impl_(o.impl_), r_lo_(o.r_lo_), r_hi_(o.r_hi_) {
  o.impl_ = nullptr;
}
ProfileInterpolant& ProfileInterpolant::operator=(ProfileInterpolant&& o) noexcept {
  std::swap(impl_, o.impl_);
  r_lo_ = o.r_lo_;
  r_hi_ = o.r_hi_;
  return *this;
}

double ProfileInterpolant::operator()(double r) const {
  r = std::clamp(r, r_lo_, r_hi_);
  return impl_->spline(std::asinh(r));
}

double ProfileInterpolant::derivative(double r) const {
  r = std::clamp(r, r_lo_, r_hi_);
  return impl_->spline.prime(std::asinh(r)) / std::sqrt(1.0 + r * r);
}

}  // namespace rdt::grid
