#include "rdt/tensor/pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rdt::tensor {

namespace {

// Sign of the last two quadratic terms of M.
constexpr double kCross = -1.0;

Mat raise_both(const Mat& m, const Mat& ginv, int n) {
  Mat t{}, out{};
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < n; ++q) {
      double s = 0;
      for (int p = 0; p < n; ++p) s += ginv[i][p] * m[p][q];
      t[i][q] = s;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int q = 0; q < n; ++q) s += t[i][q] * ginv[q][j];
      out[i][j] = s;
    }
  return out;
}

// Quadratic first-order block of M,
//   A^{ab} B^{pq} (½H1_ipa H2_jqb + H1_ajp H2_qib − H1_ajp H2_biq
//                 + κ H1_jpa H2_biq + κ H1_ipa H2_bjq),
// with H[c][i][j] = ∇_c h_ij.  Generic O(n^6) form.
Mat quadratic_generic(const R3& H1, const R3& H2, const Mat& A, const Mat& B, int n) {
  Mat out{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (A[a][b] == 0.0) continue;
          double inner = 0;
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
              if (B[p][q] == 0.0) continue;
              const double t = 0.5 * H1[i][p][a] * H2[j][q][b] + H1[a][j][p] * H2[q][i][b] -
                               H1[a][j][p] * H2[b][i][q] + kCross * H1[j][p][a] * H2[b][i][q] +
                               kCross * H1[i][p][a] * H2[b][j][q];
              inner += B[p][q] * t;
            }
          s += A[a][b] * inner;
        }
      out[i][j] = s;
    }
  return out;
}

// Same block with A = B = g^{-1} and H1 = H2, in O(n^5).
Mat quadratic_fast(const R3& H, const Mat& gi, int n) {
  R3 up{};  // up[c][p][a] = g^{pq} g^{ab} H[c][q][b]
  R3 rr{};  // rr[b][j][q] = g^{ba} g^{qp} H[a][j][p]
  for (int c = 0; c < n; ++c) up[c] = raise_both(H[c], gi, n);
  R3 t{};
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int q = 0; q < n; ++q) {
        double s = 0;
        for (int p = 0; p < n; ++p) s += gi[q][p] * H[a][j][p];
        t[a][j][q] = s;
      }
  for (int b = 0; b < n; ++b)
    for (int j = 0; j < n; ++j)
      for (int q = 0; q < n; ++q) {
        double s = 0;
        for (int a = 0; a < n; ++a) s += gi[b][a] * t[a][j][q];
        rr[b][j][q] = s;
      }
  Mat out{};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0;
      for (int p = 0; p < n; ++p)
        for (int a = 0; a < n; ++a) {
          s += 0.5 * H[i][p][a] * up[j][p][a];
          s += rr[a][j][p] * H[p][i][a] - rr[a][j][p] * H[a][i][p];
          s += kCross * up[j][p][a] * H[a][i][p] + kCross * up[i][p][a] * H[a][j][p];
        }
      out[i][j] = s;
    }
  // The block is symmetric in (i, j) up to relabelling; fill the lower half
  // from the upper half so outputs are exactly symmetric.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) out[i][j] = out[j][i];
  return out;
}

// −g^{kl} g_ip g0^{pq} Rm_jklq − (i ↔ j), with ginv_kl supplied separately so the
// first variation can reuse it.
Mat curvature_block(const Mat& ginv, const Mat& gl, const Mat& g0inv, const R4& rm, int n) {
  Mat P{};
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < n; ++q) {
      double s = 0;
      for (int p = 0; p < n; ++p) s += gl[i][p] * g0inv[p][q];
      P[i][q] = s;
    }
  Mat T{};  // T[j][q] = g^{kl} Rm_jklq
  for (int j = 0; j < n; ++j)
    for (int q = 0; q < n; ++q) {
      double s = 0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += ginv[k][l] * rm[j][k][l][q];
      T[j][q] = s;
    }
  Mat out{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int q = 0; q < n; ++q) s += P[i][q] * T[j][q] + P[j][q] * T[i][q];
      out[i][j] = -s;
    }
  return out;
}

void symmetrize(Mat& m, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const double s = 0.5 * (m[i][j] + m[j][i]);
      m[i][j] = m[j][i] = s;
    }
}

}  // namespace

SymJet constant_jet(const Mat& value, int n) {
  SymJet j;
  j.n = n;
  j.v = value;
  return j;
}

SymJet axpy(const SymJet& x, double s, const SymJet& y) {
  SymJet out = x;
  const int n = x.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.v[i][j] += s * y.v[i][j];
      for (int a = 0; a < n; ++a) {
        out.d[a][i][j] += s * y.d[a][i][j];
        for (int b = 0; b < n; ++b) out.dd[a][b][i][j] += s * y.dd[a][b][i][j];
      }
    }
  return out;
}

Connection connection(const SymJet& g) {
  const int n = g.n;
  Connection c;
  c.g = g.v;
  c.ginv = inverse(g.v, n);
  R3 low{};  // low[l][i][j] = Γ_{ij,l}
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) low[l][i][j] = 0.5 * (g.d[i][j][l] + g.d[j][i][l] - g.d[l][i][j]);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l) s += c.ginv[k][l] * low[l][i][j];
        c.gamma[k][i][j] = s;
      }
  // ∂_m g^{kl} = −g^{ka} ∂_m g_ab g^{bl}
  R3 dinv{};
  for (int m = 0; m < n; ++m) {
    Mat r = raise_both(g.d[m], c.ginv, n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) dinv[m][k][l] = -r[k][l];
  }
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0;
          for (int l = 0; l < n; ++l) {
            const double dlow =
                0.5 * (g.dd[m][i][j][l] + g.dd[m][j][i][l] - g.dd[m][l][i][j]);
            s += dinv[m][k][l] * low[l][i][j] + c.ginv[k][l] * dlow;
          }
          c.dgamma[m][k][i][j] = s;
        }
  return c;
}

R4 riemann(const Connection& c, int n) {
  R4 up{};  // up[l][i][j][k] = R^l_ijk
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = c.dgamma[i][l][j][k] - c.dgamma[j][l][i][k];
          for (int p = 0; p < n; ++p) s += c.gamma[l][i][p] * c.gamma[p][j][k] - c.gamma[l][j][p] * c.gamma[p][i][k];
          up[l][i][j][k] = s;
        }
  R4 rm{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0;
          for (int m = 0; m < n; ++m) s += c.g[l][m] * up[m][i][j][k];
          rm[i][j][k][l] = s;
        }
  return rm;
}

Mat ricci(const Connection& c, int n) {
  Mat ric{};
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0;
      for (int i = 0; i < n; ++i) {
        s += c.dgamma[i][i][j][k] - c.dgamma[j][i][i][k];
        for (int p = 0; p < n; ++p) s += c.gamma[i][i][p] * c.gamma[p][j][k] - c.gamma[i][j][p] * c.gamma[p][i][k];
      }
      ric[j][k] = s;
    }
  symmetrize(ric, n);
  return ric;
}

Background make_background(const SymJet& g0) {
  Background bg;
  bg.n = g0.n;
  bg.conn = connection(g0);
  bg.rm = riemann(bg.conn, g0.n);
  return bg;
}

CovJet covariant(const SymJet& h, const Background& bg) {
  const int n = bg.n;
  const R3& G = bg.conn.gamma;
  const R4& dG = bg.conn.dgamma;
  CovJet c;
  c.v = h.v;
  for (int b = 0; b < n; ++b)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = h.d[b][i][j];
        for (int p = 0; p < n; ++p) s -= G[p][b][i] * h.v[p][j] + G[p][b][j] * h.v[i][p];
        c.d[b][i][j] = s;
      }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = h.dd[a][b][i][j];
          for (int p = 0; p < n; ++p) {
            s -= dG[a][p][b][i] * h.v[p][j] + G[p][b][i] * h.d[a][p][j];
            s -= dG[a][p][b][j] * h.v[i][p] + G[p][b][j] * h.d[a][i][p];
            s -= G[p][a][b] * c.d[p][i][j] + G[p][a][i] * c.d[b][p][j] + G[p][a][j] * c.d[b][i][p];
          }
          c.dd[a][b][i][j] = s;
        }
  return c;
}

Mat rough_laplacian(const Mat& ginv, const CovJet& h, int n) {
  Mat out{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += ginv[a][b] * h.dd[a][b][i][j];
      out[i][j] = s;
    }
  symmetrize(out, n);
  return out;
}

Mat rdt_operator(const SymJet& g, const Background& bg) {
  const int n = bg.n;
  const Mat gi = inverse(g.v, n);
  const CovJet cg = covariant(g, bg);
  Mat m = rough_laplacian(gi, cg, n);
  const Mat r = curvature_block(gi, g.v, bg.conn.ginv, bg.rm, n);
  const Mat q = quadratic_fast(cg.d, gi, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] += r[i][j] + q[i][j];
  symmetrize(m, n);
  return m;
}

Mat rdt_operator_ricci_flat(const SymJet& g, const SymJet& g0, const Background& bg) {
  const int n = bg.n;
  const Mat gi = inverse(g.v, n);
  const Mat& g0i = bg.conn.ginv;
  const SymJet h = axpy(g, -1.0, g0);
  const CovJet ch = covariant(h, bg);
  Mat m = rough_laplacian(gi, ch, n);
  // g^{kl} = g0^{kl} − g0^{ka} h_ab g^{bl}; the g0^{kl} part is a Ricci trace.
  Mat w{};
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double s = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += g0i[k][a] * h.v[a][b] * gi[b][l];
      w[k][l] = -s;
    }
  const Mat r = curvature_block(w, g.v, g0i, bg.rm, n);
  const Mat q = quadratic_fast(ch.d, gi, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] += r[i][j] + q[i][j];
  symmetrize(m, n);
  return m;
}

Vec deturck_vector(const Connection& g, const Connection& g0, int n) {
  Vec v{};
  for (int k = 0; k < n; ++k) {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += g.ginv[i][j] * (g.gamma[k][i][j] - g0.gamma[k][i][j]);
    v[k] = s;
  }
  return v;
}

Mat rdt_linearization(const SymJet& g, const SymJet& hhat, const Background& bg) {
  const int n = bg.n;
  const Mat gi = inverse(g.v, n);
  const CovJet cg = covariant(g, bg);
  const CovJet ch = covariant(hhat, bg);
  Mat x = raise_both(hhat.v, gi, n);  // δg^{ab} = −x^{ab}
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) x[a][b] = -x[a][b];

  Mat out = rough_laplacian(gi, ch, n);
  const Mat lap_var = rough_laplacian(x, cg, n);
  const Mat r1 = curvature_block(x, g.v, bg.conn.ginv, bg.rm, n);
  const Mat r2 = curvature_block(gi, hhat.v, bg.conn.ginv, bg.rm, n);
  const Mat q1 = quadratic_generic(cg.d, cg.d, x, gi, n);
  const Mat q2 = quadratic_generic(cg.d, cg.d, gi, x, n);
  const Mat q3 = quadratic_generic(ch.d, cg.d, gi, gi, n);
  const Mat q4 = quadratic_generic(cg.d, ch.d, gi, gi, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[i][j] += lap_var[i][j] + r1[i][j] + r2[i][j] + q1[i][j] + q2[i][j] + q3[i][j] + q4[i][j];
  symmetrize(out, n);
  return out;
}

Mat lichnerowicz(const SymJet& h, const Background& bg) {
  const int n = bg.n;
  const Mat& g0i = bg.conn.ginv;
  const CovJet ch = covariant(h, bg);
  Mat out = rough_laplacian(g0i, ch, n);
  const Mat hu = raise_both(h.v, g0i, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += bg.rm[i][k][l][j] * hu[k][l];
      out[i][j] += 2.0 * s;
    }
  symmetrize(out, n);
  return out;
}

namespace {

// B_ij(a,b,p,q) of the quadratic block for a single field H.
void quadratic_kernel(const R3& H, int n, int i, int j, R4& Bk) {
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          Bk[a][b][p][q] = 0.5 * H[i][p][a] * H[j][q][b] + H[a][j][p] * H[q][i][b] -
                           H[a][j][p] * H[b][i][q] + kCross * H[j][p][a] * H[b][i][q] +
                           kCross * H[i][p][a] * H[b][j][q];
}

void closed_form_F(const R3& H, const Mat& gi, int n, R5& F) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c)
        for (int m = 0; m < n; ++m)
          for (int nn = 0; nn < n; ++nn) {
            double s = 0;
            for (int q = 0; q < n; ++q)
              for (int b = 0; b < n; ++b) {
                double t1 = 0;
                if (c == i) t1 += 0.5 * H[j][q][b] - H[b][j][q];
                if (c == j) t1 += 0.5 * H[i][b][q] - H[b][i][q];
                s += gi[m][q] * gi[nn][b] * t1;
                double t2 = 0;
                if (m == j) t2 += H[q][i][b] - H[b][i][q] - H[i][q][b];
                if (m == i) t2 += H[q][j][b] - H[b][j][q] - H[j][q][b];
                s += gi[b][c] * gi[nn][q] * t2;
              }
            F[i][j][c][m][nn] = s;
          }
}

void symmetrize_fg(FGTensors& fg) {
  const int n = fg.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < m; ++k) {
          const double g = 0.5 * (fg.G[i][j][m][k] + fg.G[i][j][k][m]);
          fg.G[i][j][m][k] = fg.G[i][j][k][m] = g;
          for (int c = 0; c < n; ++c) {
            const double f = 0.5 * (fg.F[i][j][c][m][k] + fg.F[i][j][c][k][m]);
            fg.F[i][j][c][m][k] = fg.F[i][j][c][k][m] = f;
          }
        }
}

}  // namespace

FGTensors fg_tensors(const SymJet& g, const SymJet& g0, const Background& bg) {
  const int n = bg.n;
  FGTensors fg;
  fg.n = n;
  const Mat gi = inverse(g.v, n);
  const Mat& g0i = bg.conn.ginv;
  const CovJet cg = covariant(g, bg);
  (void)g0;
  closed_form_F(cg.d, gi, n, fg.F);

  Mat P{};
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < n; ++q) {
      double s = 0;
      for (int p = 0; p < n; ++p) s += g.v[i][p] * g0i[p][q];
      P[i][q] = s;
    }
  Mat T{};  // g^{kl} Rm_jklq
  for (int j = 0; j < n; ++j)
    for (int q = 0; q < n; ++q) {
      double s = 0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += gi[k][l] * bg.rm[j][k][l][q];
      T[j][q] = s;
    }
  R4 S{};  // S[j][m][n][i] = g^{km} g^{nl} P[i][q] Rm_jklq, built in two passes
  {
    R4 U{};  // U[j][k][l][i] = P[i][q] Rm_jklq
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int q = 0; q < n; ++q) s += P[i][q] * bg.rm[j][k][l][q];
            U[j][k][l][i] = s;
          }
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        Mat kl{};
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) kl[k][l] = U[j][k][l][i];
        const Mat r = raise_both(kl, gi, n);
        for (int m = 0; m < n; ++m)
          for (int nn = 0; nn < n; ++nn) S[j][m][nn][i] = r[m][nn];
      }
  }

  R4 Bk{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      quadratic_kernel(cg.d, n, i, j, Bk);
      Mat Y1{}, Y2{};  // Y1[a][b] = g^{pq} B(a,b,p,q), Y2[p][q] = g^{ab} B(a,b,p,q)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
              Y1[a][b] += gi[p][q] * Bk[a][b][p][q];
              Y2[p][q] += gi[a][b] * Bk[a][b][p][q];
            }
      Mat lap{};
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) lap[a][b] = cg.dd[a][b][i][j];
      const Mat L = raise_both(lap, gi, n);
      const Mat Z1 = raise_both(Y1, gi, n);
      const Mat Z2 = raise_both(Y2, gi, n);
      for (int m = 0; m < n; ++m)
        for (int nn = 0; nn < n; ++nn) {
          double s = -L[m][nn] - Z1[m][nn] - Z2[m][nn];
          s += S[j][m][nn][i] + S[i][m][nn][j];
          if (m == i) s -= [&] {
              double t = 0;
              for (int q = 0; q < n; ++q) t += g0i[nn][q] * T[j][q];
              return t;
            }();
          if (m == j) s -= [&] {
              double t = 0;
              for (int q = 0; q < n; ++q) t += g0i[nn][q] * T[i][q];
              return t;
            }();
          double lich = 0;
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) lich += g0i[k][m] * g0i[l][nn] * bg.rm[i][k][l][j];
          s -= 2.0 * lich;
          fg.G[i][j][m][nn] = s;
        }
    }
  symmetrize_fg(fg);
  return fg;
}

FGTensors fg_tensors_closed_form(const SymJet& g, const SymJet& g0, const Background& bg) {
  const int n = bg.n;
  FGTensors fg;
  fg.n = n;
  const Mat gi = inverse(g.v, n);
  const Mat& g0i = bg.conn.ginv;
  const CovJet cg = covariant(g, bg);
  const SymJet h = axpy(g, -1.0, g0);
  const R4& Rm = bg.rm;
  closed_form_F(cg.d, gi, n, fg.F);
  R4 Bk{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      quadratic_kernel(cg.d, n, i, j, Bk);
      for (int m = 0; m < n; ++m)
        for (int nn = 0; nn < n; ++nn) {
          double s = 0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s -= gi[a][m] * gi[nn][b] * cg.dd[a][b][i][j];
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
              for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q)
                  s -= g0i[k][m] * g0i[l][nn] * g0i[p][q] * (h.v[i][p] * Rm[j][k][l][q] + h.v[j][p] * Rm[i][k][l][q]);
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
              if (h.v[a][b] == 0.0) continue;
              double t = 0;
              for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                  const double w = g0i[k][a] * gi[b][m] * g0i[l][nn] + gi[k][m] * gi[nn][a] * g0i[l][b];
                  for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q)
                      t += w * g0i[p][q] * (g.v[i][p] * Rm[j][k][l][q] + g.v[j][p] * Rm[i][k][l][q]);
                  for (int q = 0; q < n; ++q) {
                    double dm = 0;
                    if (i == m) dm += Rm[j][k][l][q];
                    if (j == m) dm += Rm[i][k][l][q];
                    t -= gi[k][a] * g0i[l][b] * g0i[nn][q] * dm;
                  }
                }
              s += h.v[a][b] * t;
            }
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) s -= 2.0 * gi[a][m] * gi[nn][b] * gi[p][q] * Bk[a][b][p][q];
          fg.G[i][j][m][nn] = s;
        }
    }
  symmetrize_fg(fg);
  return fg;
}

Mat apply_fg(const FGTensors& fg, const CovJet& hhat) {
  const int n = fg.n;
  Mat out{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
          s += fg.G[i][j][m][k] * hhat.v[m][k];
          for (int c = 0; c < n; ++c) s += fg.F[i][j][c][m][k] * hhat.d[c][m][k];
        }
      out[i][j] = s;
    }
  symmetrize(out, n);
  return out;
}

Mat rdt_linearization_compact(const SymJet& g, const SymJet& g0, const SymJet& hhat, const Background& bg) {
  const int n = bg.n;
  const CovJet ch = covariant(hhat, bg);
  Mat out = rough_laplacian(inverse(g.v, n), ch, n);
  const Mat hu = raise_both(hhat.v, bg.conn.ginv, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += bg.rm[i][k][l][j] * hu[k][l];
      out[i][j] += 2.0 * s;
    }
  const Mat f = apply_fg(fg_tensors(g, g0, bg), ch);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] += f[i][j];
  symmetrize(out, n);
  return out;
}

namespace {

// Applies matrix T to one slot of a flattened tensor with `rank` slots.
void transform_slot(std::vector<double>& data, int n, int rank, int slot, const Mat& T) {
  std::vector<double> out(data.size(), 0.0);
  int stride = 1;
  for (int s = rank - 1; s > slot; --s) stride *= n;
  const int block = stride * n;
  const int total = static_cast<int>(data.size());
  for (int base = 0; base < total; base += block)
    for (int inner = 0; inner < stride; ++inner)
      for (int x = 0; x < n; ++x) {
        double s = 0;
        for (int y = 0; y < n; ++y) s += T[x][y] * data[base + y * stride + inner];
        out[base + x * stride + inner] = s;
      }
  data.swap(out);
}

double tensor_norm(std::vector<double> data, int n, const std::vector<const Mat*>& metric_per_slot) {
  const std::vector<double> orig = data;
  const int rank = static_cast<int>(metric_per_slot.size());
  for (int s = 0; s < rank; ++s) transform_slot(data, n, rank, s, *metric_per_slot[s]);
  double acc = 0;
  for (std::size_t k = 0; k < data.size(); ++k) acc += data[k] * orig[k];
  return std::sqrt(std::max(acc, 0.0));
}

}  // namespace

double norm_F(const FGTensors& fg, const Mat& g0, const Mat& g0inv) {
  const int n = fg.n;
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * n * n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c)
        for (int m = 0; m < n; ++m)
          for (int k = 0; k < n; ++k) d.push_back(fg.F[i][j][c][m][k]);
  return tensor_norm(std::move(d), n, {&g0inv, &g0inv, &g0, &g0, &g0});
}

double norm_G(const FGTensors& fg, const Mat& g0, const Mat& g0inv) {
  const int n = fg.n;
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) d.push_back(fg.G[i][j][m][k]);
  return tensor_norm(std::move(d), n, {&g0inv, &g0inv, &g0, &g0});
}

double norm_h(const Mat& h, const Mat& g0inv, int n) {
  const Mat up = raise_both(h, g0inv, n);
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += up[i][j] * h[i][j];
  return std::sqrt(std::max(s, 0.0));
}

double norm_nabla_h(const R3& dh, const Mat& ginv, const Mat& g0inv, int n) {
  R3 up{};
  for (int a = 0; a < n; ++a) up[a] = raise_both(dh[a], g0inv, n);
  double s = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (ginv[a][b] == 0.0) continue;
      double t = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t += dh[a][i][j] * up[b][i][j];
      s += ginv[a][b] * t;
    }
  return std::sqrt(std::max(s, 0.0));
}

double kato_gap(const CovJet& h, const Mat& ginv, const Mat& g0inv, int n) {
  const double nh = norm_h(h.v, g0inv, n);
  const Mat hu = raise_both(h.v, g0inv, n);
  Vec grad{};
  for (int a = 0; a < n; ++a) {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += hu[i][j] * h.d[a][i][j];
    grad[a] = s / nh;
  }
  double g2 = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g2 += ginv[a][b] * grad[a] * grad[b];
  return norm_nabla_h(h.d, ginv, g0inv, n) - std::sqrt(std::max(g2, 0.0));
}

}  // namespace rdt::tensor
