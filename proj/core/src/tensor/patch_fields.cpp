#include "rdt/tensor/patch_fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdt/common.hpp"

namespace rdt::tensor {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int n2(const CartesianPatch& p) { return p.dim() * p.dim(); }
}  // namespace

PatchField::PatchField(const CartesianPatch& patch, int ncomp, int margin)
    : patch_(patch), ncomp_(ncomp), margin_(margin),
      data_(patch.node_count() * static_cast<std::size_t>(ncomp), kNaN) {}

SymTensor2Field::SymTensor2Field(const CartesianPatch& patch, int margin) : PatchField(patch, n2(patch), margin) {}

SymTensor2Field SymTensor2Field::sample(const CartesianPatch& patch, const MetricFn& fn) {
  SymTensor2Field f(patch, 0);
  for (std::size_t k = 0; k < patch.node_count(); ++k) {
    const Mat m = fn(patch.point(k));
    for (int i = 0; i < patch.dim(); ++i)
      for (int j = 0; j < patch.dim(); ++j)
        if (!std::isfinite(m[i][j])) throw PreconditionError("non-finite metric component");
    f.set(k, m);
  }
  return f;
}

Mat SymTensor2Field::get(std::size_t node) const {
  const int n = patch().dim();
  const double* p = at(node);
  Mat m{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = p[i * n + j];
  return m;
}

void SymTensor2Field::set(std::size_t node, const Mat& m) {
  const int n = patch().dim();
  double* p = at(node);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double s = (i == j) ? m[i][i] : 0.5 * (m[i][j] + m[j][i]);
      p[i * n + j] = s;
      p[j * n + i] = s;
    }
}

SymJet SymTensor2Field::jet(std::size_t node) const {
  const CartesianPatch& P = patch();
  const int n = P.dim();
  require(P.margin(node) >= margin() + 2, "jet requested too close to the patch boundary");
  SymJet J;
  J.n = n;
  J.v = get(node);
  double buf[kMaxDim * kMaxDim];
  for (int a = 0; a < n; ++a) {
    grid::fd_first(P, raw(), n * n, node, a, buf);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J.d[a][i][j] = buf[i * n + j];
    for (int b = a; b < n; ++b) {
      grid::fd_second(P, raw(), n * n, node, a, b, buf);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J.dd[a][b][i][j] = J.dd[b][a][i][j] = buf[i * n + j];
    }
  }
  return J;
}

double SymTensor2Field::max_asymmetry() const {
  const int n = patch().dim();
  double worst = 0;
  for (std::size_t k = 0; k < patch().node_count(); ++k) {
    if (!valid(k)) continue;
    const double* p = at(k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) worst = std::max(worst, std::abs(p[i * n + j] - p[j * n + i]));
  }
  return worst;
}

Vec VectorField::get(std::size_t node) const {
  Vec v{};
  const double* p = at(node);
  for (int i = 0; i < patch().dim(); ++i) v[i] = p[i];
  return v;
}

PatchMetric PatchMetric::sample(const CartesianPatch& patch, const MetricFn& g, const MetricFn& g0) {
  return PatchMetric{SymTensor2Field::sample(patch, g), SymTensor2Field::sample(patch, g0)};
}

void PatchMetric::validate() const {
  const int n = g.patch().dim();
  for (std::size_t k = 0; k < g.patch().node_count(); ++k) {
    if (!(smallest_eigenvalue(g.get(k), n) > 0)) throw NumericalError("metric g is not positive definite");
    if (!(smallest_eigenvalue(g0.get(k), n) > 0)) throw NumericalError("background g0 is not positive definite");
  }
}

double PatchMetric::closeness_lambda() const {
  const int n = g.patch().dim();
  double worst = 1.0;
  for (std::size_t k = 0; k < g.patch().node_count(); ++k) {
    double lo, hi;
    relative_eigen_range(g.get(k), g0.get(k), n, lo, hi);
    worst = std::max({worst, std::sqrt(hi), 1.0 / std::sqrt(lo)});
  }
  return worst;
}

PatchField christoffels(const SymTensor2Field& g) {
  const CartesianPatch& P = g.patch();
  const int n = P.dim();
  const int m = g.margin() + 2;
  PatchField out(P, n * n * n, m);
  double buf[kMaxDim * kMaxDim];
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m) continue;
    R3 d{};
    for (int a = 0; a < n; ++a) {
      grid::fd_first(P, g.raw(), n * n, k, a, buf);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[a][i][j] = buf[i * n + j];
    }
    const Mat gi = inverse(g.get(k), n);
    double* o = out.at(k);
    for (int c = 0; c < n; ++c)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0;
          for (int l = 0; l < n; ++l) s += gi[c][l] * 0.5 * (d[i][j][l] + d[j][i][l] - d[l][i][j]);
          o[(c * n + i) * n + j] = s;
        }
  }
  return out;
}

namespace {

void finish_pack(CurvaturePack& pack, const CartesianPatch& P, const SymTensor2Field& g) {
  const int n = P.dim();
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < pack.margin) continue;
    const R4& rm = pack.rm[k];
    const Mat gi = inverse(g.get(k), n);
    Mat ric{};
    double norm2 = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            pack.max_bianchi_residual =
                std::max(pack.max_bianchi_residual, std::abs(rm[i][j][a][b] + rm[j][a][i][b] + rm[a][i][j][b]));
            pack.max_pair_residual = std::max(pack.max_pair_residual, std::abs(rm[i][j][a][b] - rm[a][b][i][j]));
            pack.max_antisymmetry = std::max(pack.max_antisymmetry, std::abs(rm[i][j][a][b] + rm[j][i][a][b]) +
                                                                        std::abs(rm[i][j][a][b] + rm[i][j][b][a]));
          }
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c) {
        double s = 0;
        for (int i = 0; i < n; ++i)
          for (int l = 0; l < n; ++l) s += gi[i][l] * rm[i][j][c][l];
        ric[j][c] = s;
      }
    // |Rm|² with all indices moved by g.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double up = 0;
            for (int p = 0; p < n; ++p)
              for (int q = 0; q < n; ++q)
                for (int r = 0; r < n; ++r)
                  for (int s = 0; s < n; ++s)
                    up += gi[i][p] * gi[j][q] * gi[a][r] * gi[b][s] * rm[p][q][r][s];
            norm2 += up * rm[i][j][a][b];
          }
    pack.ricci.set(k, ric);
    *pack.rm_norm.at(k) = std::sqrt(std::max(norm2, 0.0));
  }
}

}  // namespace

CurvaturePack curvature(const SymTensor2Field& g) {
  const CartesianPatch& P = g.patch();
  const int n = P.dim();
  const int m = g.margin() + 2;
  CurvaturePack pack{m, std::vector<R4>(P.node_count()), SymTensor2Field(P, m), ScalarField(P, m)};
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m) continue;
    pack.rm[k] = riemann(connection(g.jet(k)), n);
  }
  finish_pack(pack, P, g);
  return pack;
}

CurvaturePack curvature_from_christoffels(const SymTensor2Field& g) {
  const CartesianPatch& P = g.patch();
  const int n = P.dim();
  const PatchField gam = christoffels(g);
  const int m = gam.margin() + 2;
  const int nc = n * n * n;
  CurvaturePack pack{m, std::vector<R4>(P.node_count()), SymTensor2Field(P, m), ScalarField(P, m)};
  std::vector<double> d(static_cast<std::size_t>(n * nc));
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m) continue;
    for (int a = 0; a < n; ++a) grid::fd_first(P, gam.raw(), nc, k, a, d.data() + a * nc);
    auto G = [&](int c, int i, int j) { return gam.at(k)[(c * n + i) * n + j]; };
    auto dG = [&](int a, int c, int i, int j) { return d[a * nc + (c * n + i) * n + j]; };
    const Mat gv = g.get(k);
    R4 up{};
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int c = 0; c < n; ++c) {
            double s = dG(i, l, j, c) - dG(j, l, i, c);
            for (int p = 0; p < n; ++p) s += G(l, i, p) * G(p, j, c) - G(l, j, p) * G(p, i, c);
            up[l][i][j][c] = s;
          }
    R4& rm = pack.rm[k];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c)
          for (int l = 0; l < n; ++l) {
            double s = 0;
            for (int q = 0; q < n; ++q) s += gv[l][q] * up[q][i][j][c];
            rm[i][j][c][l] = s;
          }
  }
  finish_pack(pack, P, g);
  return pack;
}

VectorField deturck_vector(const PatchMetric& pm) {
  const CartesianPatch& P = pm.g.patch();
  const int n = P.dim();
  const int m = std::max(pm.g.margin(), pm.g0.margin()) + 2;
  VectorField out(P, m);
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m) continue;
    const Vec v = deturck_vector(connection(pm.g.jet(k)), connection(pm.g0.jet(k)), n);
    for (int i = 0; i < n; ++i) out.at(k)[i] = v[i];
  }
  return out;
}

VectorField deturck_vector_global(const PatchMetric& pm) {
  const CartesianPatch& P = pm.g.patch();
  const int n = P.dim();
  const int m = std::max(pm.g.margin(), pm.g0.margin()) + 2;
  ScalarField tr(P, m - 2);
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m - 2) continue;
    const Mat gi = inverse(pm.g.get(k), n);
    const Mat g0 = pm.g0.get(k);
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += gi[i][j] * g0[i][j];
    *tr.at(k) = s;
  }
  VectorField out(P, m);
  double buf[kMaxDim * kMaxDim];
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m) continue;
    const Connection c = connection(pm.g.jet(k));
    const Mat g0 = pm.g0.get(k);
    R3 dg0{};
    for (int a = 0; a < n; ++a) {
      grid::fd_first(P, pm.g0.raw(), n * n, k, a, buf);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dg0[a][i][j] = buf[i * n + j];
    }
    Vec w{};
    for (int l = 0; l < n; ++l) {
      double div = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double cov = dg0[i][j][l];
          for (int p = 0; p < n; ++p) cov -= c.gamma[p][i][j] * g0[p][l] + c.gamma[p][i][l] * g0[j][p];
          div += c.ginv[i][j] * cov;
        }
      double dtr;
      grid::fd_first(P, tr.raw(), 1, k, l, &dtr);
      w[l] = -div + 0.5 * dtr;
    }
    const Mat g0i = inverse(g0, n);
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int l = 0; l < n; ++l) s += g0i[i][l] * w[l];
      out.at(k)[i] = s;
    }
  }
  return out;
}

SymTensor2Field ricci_deturck(const PatchMetric& pm) {
  const CartesianPatch& P = pm.g.patch();
  const int m = std::max(pm.g.margin(), pm.g0.margin()) + 2;
  SymTensor2Field out(P, m);
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m) continue;
    out.set(k, rdt_operator(pm.g.jet(k), make_background(pm.g0.jet(k))));
  }
  return out;
}

SymTensor2Field ricci_deturck_ricci_flat(const PatchMetric& pm) {
  const CartesianPatch& P = pm.g.patch();
  const int m = std::max(pm.g.margin(), pm.g0.margin()) + 2;
  SymTensor2Field out(P, m);
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m) continue;
    const SymJet g0 = pm.g0.jet(k);
    out.set(k, rdt_operator_ricci_flat(pm.g.jet(k), g0, make_background(g0)));
  }
  return out;
}

SymTensor2Field ricci_deturck_oracle(const PatchMetric& pm) {
  const CartesianPatch& P = pm.g.patch();
  const int n = P.dim();
  const PatchField gam = christoffels(pm.g);
  const PatchField gam0 = christoffels(pm.g0);
  const int m1 = std::max(gam.margin(), gam0.margin());
  VectorField V(P, m1);
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m1) continue;
    const Mat gi = inverse(pm.g.get(k), n);
    for (int c = 0; c < n; ++c) {
      double s = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const int idx = (c * n + i) * n + j;
          s += gi[i][j] * (gam.at(k)[idx] - gam0.at(k)[idx]);
        }
      V.at(k)[c] = s;
    }
  }
  const int m2 = m1 + 2;
  const int nc = n * n * n;
  SymTensor2Field out(P, m2);
  std::vector<double> dgam(static_cast<std::size_t>(n * nc));
  std::vector<double> dV(static_cast<std::size_t>(n * n));
  double buf[kMaxDim * kMaxDim];
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m2) continue;
    for (int a = 0; a < n; ++a) {
      grid::fd_first(P, gam.raw(), nc, k, a, dgam.data() + a * nc);
      grid::fd_first(P, V.raw(), n, k, a, dV.data() + a * n);
    }
    auto G = [&](int c, int i, int j) { return gam.at(k)[(c * n + i) * n + j]; };
    auto dG = [&](int a, int c, int i, int j) { return dgam[a * nc + (c * n + i) * n + j]; };
    const Mat gv = pm.g.get(k);
    const double* v = V.at(k);
    R3 dg{};
    for (int a = 0; a < n; ++a) {
      grid::fd_first(P, pm.g.raw(), n * n, k, a, buf);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dg[a][i][j] = buf[i * n + j];
    }
    Mat M{};
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c) {
        double ric = 0;
        for (int i = 0; i < n; ++i) {
          ric += dG(i, i, j, c) - dG(c, i, j, i);
          for (int p = 0; p < n; ++p) ric += G(i, i, p) * G(p, j, c) - G(i, c, p) * G(p, j, i);
        }
        double lie = 0;
        for (int q = 0; q < n; ++q)
          lie += v[q] * dg[q][j][c] + gv[q][c] * dV[j * n + q] + gv[j][q] * dV[c * n + q];
        M[j][c] = -2.0 * ric + lie;
      }
    out.set(k, M);
  }
  return out;
}

SymTensor2Field lichnerowicz(const SymTensor2Field& h, const SymTensor2Field& g0) {
  const CartesianPatch& P = h.patch();
  const int m = std::max(h.margin(), g0.margin()) + 2;
  SymTensor2Field out(P, m);
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m) continue;
    out.set(k, lichnerowicz(h.jet(k), make_background(g0.jet(k))));
  }
  return out;
}

SymTensor2Field linearized_rdt(const PatchMetric& pm, const SymTensor2Field& hhat) {
  const CartesianPatch& P = pm.g.patch();
  const int m = std::max({pm.g.margin(), pm.g0.margin(), hhat.margin()}) + 2;
  SymTensor2Field out(P, m);
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m) continue;
    const SymJet g0 = pm.g0.jet(k);
    out.set(k, rdt_linearization_compact(pm.g.jet(k), g0, hhat.jet(k), make_background(g0)));
  }
  return out;
}

KatoResult kato_gap(const SymTensor2Field& h, const SymTensor2Field& g, const SymTensor2Field& g0) {
  const CartesianPatch& P = h.patch();
  const int n = P.dim();
  const int m = std::max({h.margin(), g.margin(), g0.margin()}) + 2;
  KatoResult res{ScalarField(P, m), 0, std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (P.margin(k) < m) continue;
    const Background bg = make_background(g0.jet(k));
    const CovJet ch = covariant(h.jet(k), bg);
    if (norm_h(ch.v, bg.conn.ginv, n) == 0.0) {
      ++res.excluded;
      continue;
    }
    const double gap = tensor::kato_gap(ch, inverse(g.get(k), n), bg.conn.ginv, n);
    *res.gap.at(k) = gap;
    res.min_gap = std::min(res.min_gap, gap);
  }
  return res;
}

double max_difference(const PatchField& a, const PatchField& b) {
  require(a.components() == b.components(), "component mismatch");
  const CartesianPatch& P = a.patch();
  double worst = 0;
  for (std::size_t k = 0; k < P.node_count(); ++k) {
    if (!a.valid(k) || !b.valid(k)) continue;
    for (int c = 0; c < a.components(); ++c) worst = std::max(worst, std::abs(a.at(k)[c] - b.at(k)[c]));
  }
  return worst;
}

double max_abs(const PatchField& a) {
  double worst = 0;
  for (std::size_t k = 0; k < a.patch().node_count(); ++k) {
    if (!a.valid(k)) continue;
    for (int c = 0; c < a.components(); ++c) worst = std::max(worst, std::abs(a.at(k)[c]));
  }
  return worst;
}

}  // namespace rdt::tensor

namespace rdt::tensor {

SymJet point_jet(const MetricFn& fn, const Vec& x, int n, double step) {
  SymJet J;
  J.n = n;
  J.v = fn(x);
  auto at = [&](int a, double sa, int b, double sb) {
    Vec y = x;
    y[a] += sa * step;
    if (b >= 0) y[b] += sb * step;
    return fn(y);
  };
  static constexpr double w1[4] = {1.0, -8.0, 8.0, -1.0};
  static constexpr double o[4] = {-2.0, -1.0, 1.0, 2.0};
  for (int a = 0; a < n; ++a) {
    Mat p[4];
    for (int s = 0; s < 4; ++s) p[s] = at(a, o[s], -1, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double d1 = 0;
        for (int s = 0; s < 4; ++s) d1 += w1[s] * p[s][i][j];
        J.d[a][i][j] = d1 / (12 * step);
        J.dd[a][a][i][j] =
            (-p[0][i][j] + 16 * p[1][i][j] - 30 * J.v[i][j] + 16 * p[2][i][j] - p[3][i][j]) / (12 * step * step);
      }
    for (int b = a + 1; b < n; ++b) {
      Mat acc{};
      for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t) {
          const Mat q = at(a, o[s], b, o[t]);
          const double w = w1[s] * w1[t];
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc[i][j] += w * q[i][j];
        }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J.dd[a][b][i][j] = J.dd[b][a][i][j] = acc[i][j] / (144 * step * step);
    }
  }
  return J;
}

}  // namespace rdt::tensor
