#include "rdt/tensor/small.hpp"

#include <Eigen/Dense>

#include "rdt/common.hpp"

namespace rdt::tensor {

namespace {
using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

EMat to_eigen(const Mat& m, int n) {
  EMat e(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e(i, j) = m[i][j];
  return e;
}
}  // namespace

Mat identity(int n) {
  Mat m{};
  for (int i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

Mat inverse(const Mat& m, int n) {
  EMat e = to_eigen(m, n);
  Eigen::PartialPivLU<EMat> lu(e);
  if (!(std::abs(lu.determinant()) > 1e-300)) throw NumericalError("singular metric");
  EMat inv = lu.inverse();
  Mat out{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = 0.5 * (inv(i, j) + inv(j, i));
  return out;
}

double smallest_eigenvalue(const Mat& m, int n) {
  Eigen::SelfAdjointEigenSolver<EMat> es(to_eigen(m, n), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void relative_eigen_range(const Mat& g, const Mat& g0, int n, double& lo, double& hi) {
  Eigen::GeneralizedSelfAdjointEigenSolver<EMat> es(to_eigen(g, n), to_eigen(g0, n), Eigen::EigenvaluesOnly);
  lo = es.eigenvalues()(0);
  hi = es.eigenvalues()(n - 1);
}

double frob2(const Mat& m, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += m[i][j] * m[i][j];
  return s;
}

}  // namespace rdt::tensor
