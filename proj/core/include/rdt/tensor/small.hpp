#pragma once

#include <array>
#include <cstddef>

namespace rdt::tensor {

// Largest ambient dimension handled by the fixed-capacity pointwise algebra.
inline constexpr int kMaxDim = 5;

using Vec = std::array<double, kMaxDim>;
using Mat = std::array<Vec, kMaxDim>;
using R3 = std::array<Mat, kMaxDim>;
using R4 = std::array<R3, kMaxDim>;
using R5 = std::array<R4, kMaxDim>;

template <class T>
T zero() {
  T t{};
  return t;
}

Mat identity(int n);
Mat inverse(const Mat& m, int n);
double smallest_eigenvalue(const Mat& m, int n);

// Eigenvalues of g relative to g0, i.e. of g0^{-1} g.
void relative_eigen_range(const Mat& g, const Mat& g0, int n, double& lo, double& hi);

// g(X, X) style contractions on the full tensor, Euclidean unless stated.
double frob2(const Mat& m, int n);

}  // namespace rdt::tensor
