#pragma once

// Pointwise tensor algebra on 2-jets.  Every routine here is exact algebra on
// the supplied values and partial derivatives; discretisation lives in the
// patch layer.
//
// Curvature convention: R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z and
// Rm_ijkl = g(R(∂_i,∂_j)∂_k, ∂_l), so sectional curvature is Rm_ijji/|∂_i∧∂_j|²
// and Ric_jk = g^{il} Rm_ijkl.

#include "rdt/tensor/small.hpp"

namespace rdt::tensor {

// Value, first and second partial derivatives of a symmetric 2-tensor.
// d[a][i][j] = ∂_a h_ij, dd[a][b][i][j] = ∂_a∂_b h_ij.
struct SymJet {
  int n = 0;
  Mat v{};
  R3 d{};
  R4 dd{};
};

SymJet constant_jet(const Mat& value, int n);
SymJet axpy(const SymJet& x, double s, const SymJet& y);  // x + s·y

// Levi-Civita data of a metric jet.
struct Connection {
  Mat g{}, ginv{};
  R3 gamma{};   // gamma[k][i][j] = Γ^k_ij
  R4 dgamma{};  // dgamma[l][k][i][j] = ∂_l Γ^k_ij
};
Connection connection(const SymJet& g);

R4 riemann(const Connection& c, int n);  // lowered Rm_ijkl
Mat ricci(const Connection& c, int n);

// Background data needed to differentiate covariantly with respect to g0.
struct Background {
  int n = 0;
  Connection conn;
  R4 rm{};
};
Background make_background(const SymJet& g0);

// ∇h and ∇∇h with respect to the background connection.
// d[c][i][j] = ∇_c h_ij, dd[a][b][i][j] = ∇_a∇_b h_ij.
struct CovJet {
  Mat v{};
  R3 d{};
  R4 dd{};
};
CovJet covariant(const SymJet& h, const Background& bg);

// Δ_{g,g0} h = g^{ab} ∇_a∇_b h.
Mat rough_laplacian(const Mat& ginv, const CovJet& h, int n);

// Ricci-DeTurck operator M(g) for a general background.
Mat rdt_operator(const SymJet& g, const Background& bg);
// Same operator written through h = g − g0, valid when g0 is Ricci-flat.
Mat rdt_operator_ricci_flat(const SymJet& g, const SymJet& g0, const Background& bg);
// DeTurck vector V^k = g^{ij}(Γ(g)^k_ij − Γ(g0)^k_ij).
Vec deturck_vector(const Connection& g, const Connection& g0, int n);

// Linearisation dM_g(ĥ) evaluated directly from the first variation.
Mat rdt_linearization(const SymJet& g, const SymJet& hhat, const Background& bg);

// Lichnerowicz Laplacian Δh + 2 g0^{ka} g0^{lb} Rm_iklj h_ab (Ricci-flat form).
Mat lichnerowicz(const SymJet& h, const Background& bg);

// Coefficient tensors of the compact linearisation
//   dM_g(ĥ) = Δ_{g,g0}ĥ + 2 Rm(g0)·ĥ + F_ij^{cmn} ∇_c ĥ_mn + G_ij^{mn} ĥ_mn,
// symmetrised in (m, n).
struct FGTensors {
  int n = 0;
  R5 F{};  // F[i][j][c][m][n]
  R4 G{};  // G[i][j][m][n]
};
FGTensors fg_tensors(const SymJet& g, const SymJet& g0, const Background& bg);
// Term-by-term transcription of the published closed-form coefficients, used
// to audit them against fg_tensors.  Pairs with a −2 Rm(g0)·ĥ leading term.
FGTensors fg_tensors_closed_form(const SymJet& g, const SymJet& g0, const Background& bg);
Mat apply_fg(const FGTensors& fg, const CovJet& hhat);
// dM_g(ĥ) assembled from the compact form with fg_tensors.
Mat rdt_linearization_compact(const SymJet& g, const SymJet& g0, const SymJet& hhat, const Background& bg);
// Norms with all indices moved by g0.
double norm_F(const FGTensors& fg, const Mat& g0, const Mat& g0inv);
double norm_G(const FGTensors& fg, const Mat& g0, const Mat& g0inv);

// Norms used by the Kato inequality.
double norm_h(const Mat& h, const Mat& g0inv, int n);
double norm_nabla_h(const R3& dh, const Mat& ginv, const Mat& g0inv, int n);
// |∇h|_{g,g0} − |∇|h||_g at a point with h ≠ 0.
double kato_gap(const CovJet& h, const Mat& ginv, const Mat& g0inv, int n);

}  // namespace rdt::tensor
