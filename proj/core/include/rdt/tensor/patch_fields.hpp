#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rdt/grid/cartesian_patch.hpp"
#include "rdt/tensor/pointwise.hpp"

namespace rdt::tensor {

using grid::CartesianPatch;

// Symmetric 2-tensor as a function of position (Cartesian components).
using MetricFn = std::function<Mat(const Vec&)>;

// Per-node field with `ncomp` components.  Nodes closer than `margin` to the
// patch boundary carry NaN: the stencil chain that produced the field did not
// reach them.
class PatchField {
 public:
  PatchField(const CartesianPatch& patch, int ncomp, int margin);

  const CartesianPatch& patch() const { return patch_; }
  int components() const { return ncomp_; }
  int margin() const { return margin_; }
  bool valid(std::size_t node) const { return patch_.margin(node) >= margin_; }
  double* at(std::size_t node) { return data_.data() + node * static_cast<std::size_t>(ncomp_); }
  const double* at(std::size_t node) const { return data_.data() + node * static_cast<std::size_t>(ncomp_); }
  const std::vector<double>& raw() const { return data_; }

 private:
  CartesianPatch patch_;
  int ncomp_;
  int margin_;
  std::vector<double> data_;
};

class SymTensor2Field : public PatchField {
 public:
  SymTensor2Field(const CartesianPatch& patch, int margin);
  static SymTensor2Field sample(const CartesianPatch& patch, const MetricFn& fn);

  Mat get(std::size_t node) const;
  void set(std::size_t node, const Mat& m);  // symmetrises
  // Fourth-order finite-difference 2-jet; needs margin ≥ margin() + 2.
  SymJet jet(std::size_t node) const;
  double max_asymmetry() const;
};

class VectorField : public PatchField {
 public:
  VectorField(const CartesianPatch& patch, int margin) : PatchField(patch, patch.dim(), margin) {}
  Vec get(std::size_t node) const;
};

class ScalarField : public PatchField {
 public:
  ScalarField(const CartesianPatch& patch, int margin) : PatchField(patch, 1, margin) {}
  double get(std::size_t node) const { return *at(node); }
};

struct PatchMetric {
  SymTensor2Field g;
  SymTensor2Field g0;

  static PatchMetric sample(const CartesianPatch& patch, const MetricFn& g, const MetricFn& g0);
  // Throws NumericalError if g or g0 is not positive definite at some node.
  void validate() const;
  // Smallest λ with λ⁻²g0 ≤ g ≤ λ²g0 over all nodes.
  double closeness_lambda() const;
};

struct CurvaturePack {
  int margin = 0;
  std::vector<R4> rm;          // lowered Rm_ijkl per node (zero outside margin)
  SymTensor2Field ricci;
  ScalarField rm_norm;
  double max_bianchi_residual = 0;   // |Rm_ijkl + Rm_jkil + Rm_kijl|
  double max_pair_residual = 0;      // |Rm_ijkl − Rm_klij|
  double max_antisymmetry = 0;       // |Rm_ijkl + Rm_jikl| + |Rm_ijkl + Rm_ijlk|
};

// Connection coefficients Γ^k_ij per node, stored [k][i][j].
PatchField christoffels(const SymTensor2Field& g);
// Curvature from exact formulas on FD 2-jets.
CurvaturePack curvature(const SymTensor2Field& g);
// Curvature from finite differences of the Christoffel field.
CurvaturePack curvature_from_christoffels(const SymTensor2Field& g);

VectorField deturck_vector(const PatchMetric& pm);
// g0(V, ·) = −div_g g0 + ½ d tr_g g0.
VectorField deturck_vector_global(const PatchMetric& pm);

SymTensor2Field ricci_deturck(const PatchMetric& pm);
SymTensor2Field ricci_deturck_ricci_flat(const PatchMetric& pm);
// −2 Ric(g) + L_V g assembled from independently differentiated fields.
SymTensor2Field ricci_deturck_oracle(const PatchMetric& pm);

SymTensor2Field lichnerowicz(const SymTensor2Field& h, const SymTensor2Field& g0);
SymTensor2Field linearized_rdt(const PatchMetric& pm, const SymTensor2Field& hhat);

struct KatoResult {
  ScalarField gap;
  std::size_t excluded = 0;  // nodes with |h| = 0
  double min_gap = 0;
};
KatoResult kato_gap(const SymTensor2Field& h, const SymTensor2Field& g, const SymTensor2Field& g0);

// Max |a − b| over nodes valid in both fields.
double max_difference(const PatchField& a, const PatchField& b);
double max_abs(const PatchField& a);

}  // namespace rdt::tensor

namespace rdt::tensor {

// Fourth-order FD 2-jet of a tensor-valued function at a single point.
SymJet point_jet(const MetricFn& fn, const Vec& x, int n, double step);

}  // namespace rdt::tensor
