#include "gim/gaussmap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gim/errors.hpp"

namespace gim::gaussmap {

namespace {

double rel(double diff, double scale) { return diff / std::max(1.0, scale); }

VBilinear conn_as_bilinear(const ConnDiff& T) {
  const int n = static_cast<int>(T.T0.size());
  VBilinear vb(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < n; ++e) vb.at(e, a, b) = T.T0[a](e, b);
  return vb;
}

}  // namespace

ObataData obata(const ShapeData& shape, const GeometryJet& geom) {
  const int n = shape.n();
  auto layout = shape.A[0].layout();

  ObataData ob;
  ob.W = JMat(n, n, layout);
  for (const auto& A : shape.A) ob.W = jmat_add(ob.W, jmat_mul(A, A));
  ob.III = jmat_mul(geom.g.truncated(ob.W.order()), ob.W);
  ob.W0 = ob.W.values();
  ob.III0 = ob.III.values();

  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(geom.g0 * ob.W0, geom.g0);
  ob.w = ges.eigenvalues();
  ob.U = ges.eigenvectors();

  double w_min = ob.w.minCoeff(), w_max = ob.w.maxCoeff();
  if (w_max <= 0 || w_min < immersion::kNullityRatio * w_max) {
    std::ostringstream os;
    os << "Obata operator fails the invertibility threshold: smallest eigenvalue " << w_min;
    throw RegularityError(w_min, os.str());
  }

  ob.V = Mat(n, n);
  Mat winv = Mat::Zero(n, n), winvhalf = Mat::Zero(n, n);
  for (int mu = 0; mu < n; ++mu) {
    ob.V.col(mu) = ob.U.col(mu) / std::sqrt(ob.w[mu]);
    winv(mu, mu) = 1.0 / ob.w[mu];
    winvhalf(mu, mu) = 1.0 / std::sqrt(ob.w[mu]);
  }
  ob.Winv0 = ob.U * winv * ob.U.transpose() * geom.g0;
  ob.Winvhalf0 = ob.U * winvhalf * ob.U.transpose() * geom.g0;

  ob.det = 1.0;
  for (int mu = 0; mu < n; ++mu) ob.det *= ob.w[mu];
  ob.sigma_nm1 = 0.0;
  for (int i = 0; i < n; ++i) {
    double p = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != i) p *= ob.w[j];
    ob.sigma_nm1 += p;
  }
  return ob;
}

double obata_identity_residual(const ObataData& ob, const ShapeData& shape, const Mat& ricci_I,
                               double k, const GeometryJet& geom) {
  const int n = ob.W0.rows();
  Mat ric_op = geom.g0.inverse() * ricci_I;
  Mat resid = ob.W0 - k * (n - 1) * Mat::Identity(n, n) - shape.A_H + ric_op;
  double scale = std::max({ob.W0.lpNorm<Eigen::Infinity>(), shape.A_H.lpNorm<Eigen::Infinity>(),
                           ric_op.lpNorm<Eigen::Infinity>()});
  return rel(resid.lpNorm<Eigen::Infinity>(), scale);
}

ConnDiff connection_difference(const ShapeData& shape, const ObataData& ob) {
  const int n = shape.n();
  const int ord = shape.dA[0][0].order();
  JMat winv = jmat_inverse(ob.W.truncated(ord));

  ConnDiff T;
  for (int a = 0; a < n; ++a) {
    JMat acc(n, n, winv.layout());
    for (int j = 0; j < shape.m(); ++j)
      acc = jmat_add(acc, jmat_mul(shape.A[j].truncated(ord), shape.dA[a][j]));
    T.T.push_back(jmat_mul(winv, acc));
    T.T0.push_back(T.T.back().values());
  }

  // T(X,Y) = T(Y,X) is forced by torsion-freeness; assert, never average.
  double scale = 1.0, worst = 0.0;
  for (int a = 0; a < n; ++a) scale = std::max(scale, T.T0[a].lpNorm<Eigen::Infinity>());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) worst = std::max(worst, std::abs(T.T0[a](c, b) - T.T0[b](c, a)));
  if (worst > 1e-7 * scale) throw Error("connection difference is not symmetric");
  return T;
}

ConnDiff connection_difference_oracle(const ObataData& ob, const GeometryJet& geom) {
  auto gamma_iii = intrinsic::christoffel(ob.III);
  auto gamma_i = intrinsic::christoffel(geom.g.truncated(ob.III.order()));
  ConnDiff T;
  for (std::size_t a = 0; a < gamma_i.size(); ++a) T.T0.push_back(gamma_iii[a] - gamma_i[a]);
  return T;
}

ConnDiff connection_difference_principal(const PrincipalDecomp& decomp, const ShapeData& shape,
                                         const GeometryJet& geom) {
  if (decomp.ambiguous)
    throw ClusterError(decomp.cluster_gap, "eigenvalue clusters are too close to separate");
  const int n = shape.n();
  const int s = decomp.s;

  std::vector<Mat> gamma0(n);
  for (int a = 0; a < n; ++a) gamma0[a] = shape.christoffel[a].values();

  ConnDiff T;
  T.T0.assign(n, Mat::Zero(n, n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Vec acc = Vec::Zero(n);
      for (int j = 0; j < s; ++j) {
        const auto& cj = decomp.clusters[j];
        Vec Yj = cj.proj0.col(b);
        // derivative of the E_j-valued field P_j e_b along e_a
        Vec D(n);
        for (int r = 0; r < n; ++r) D[r] = cj.proj.at(r, b).deriv({a});
        D += gamma0[a] * Yj;
        for (int k = 0; k < s; ++k) {
          if (k == j) {
            acc += cj.log_eta_norm.deriv({a}) * Yj;
          } else {
            Vec ek = decomp.eta(k);
            double coef = (decomp.eta(j) - ek).dot(ek) / ek.squaredNorm();
            acc += coef * (decomp.clusters[k].proj0 * D);
          }
        }
      }
      for (int c = 0; c < n; ++c) T.T0[a](c, b) = acc[c];
    }
  (void)geom;
  return T;
}

Curv4 generalized_kn(const VBilinear& h, const VBilinear& k, const Mat& inner, MetricTag tag) {
  if (h.n != k.n || h.edim != k.edim || inner.rows() != h.edim)
    throw Error("generalized_kn: dimension mismatch");
  const int n = h.n;
  auto pair = [&](const VBilinear& p, int pa, int pb, const VBilinear& q, int qa, int qb) {
    double acc = 0.0;
    for (int e = 0; e < p.edim; ++e)
      for (int f = 0; f < p.edim; ++f) acc += inner(e, f) * p.at(e, pa, pb) * q.at(f, qa, qb);
    return acc;
  };
  Curv4 out(n, tag);
  for (int x1 = 0; x1 < n; ++x1)
    for (int x2 = 0; x2 < n; ++x2)
      for (int x3 = 0; x3 < n; ++x3)
        for (int x4 = 0; x4 < n; ++x4)
          out.at(x1, x2, x3, x4) =
              0.5 * (pair(h, x1, x3, k, x2, x4) - pair(h, x1, x4, k, x2, x3) +
                     pair(h, x2, x4, k, x1, x3) - pair(h, x2, x3, k, x1, x4));
  return out;
}

AuxTensors build_aux_tensors(const ShapeData& shape, const ObataData& ob, const Ten13& riemann_I,
                             PReading reading) {
  const int n = shape.n();
  const int m = shape.m();

  std::vector<Mat> A0(m), dA0(static_cast<std::size_t>(n) * m);
  for (int j = 0; j < m; ++j) A0[j] = shape.A[j].values();
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < m; ++j) dA0[a * m + j] = shape.dA[a][j].values();

  AuxTensors aux;
  aux.P = Ten13(n);
  aux.L = Ten13(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Mat rop(n, n);
      for (int z = 0; z < n; ++z)
        for (int d = 0; d < n; ++d) rop(d, z) = riemann_I.at(a, b, z, d);
      Mat sumL = Mat::Zero(n, n), sumP = Mat::Zero(n, n);
      for (int j = 0; j < m; ++j) {
        Mat curv_part = reading == PReading::commutator
                          ? Mat(A0[j] * (rop * A0[j] - A0[j] * rop))
                          : Mat(A0[j] * rop * A0[j]);
        sumL += curv_part;
        sumP += curv_part + dA0[a * m + j] * dA0[b * m + j] - dA0[b * m + j] * dA0[a * m + j];
      }
      Mat Pm = ob.Winv0 * sumP;
      Mat Lm = ob.Winv0 * sumL;
      for (int z = 0; z < n; ++z)
        for (int d = 0; d < n; ++d) {
          aux.P.at(a, b, z, d) = Pm(d, z);
          aux.L.at(a, b, z, d) = Lm(d, z);
        }
    }

  aux.J.reserve(m);
  for (int j = 0; j < m; ++j) {
    VBilinear Jj(n, n);
    for (int a = 0; a < n; ++a) {
      Mat M = ob.Winvhalf0 * dA0[a * m + j];
      for (int b = 0; b < n; ++b)
        for (int e = 0; e < n; ++e) Jj.at(e, a, b) = M(e, b);
    }
    aux.J.push_back(std::move(Jj));
  }
  return aux;
}

namespace {

Curv4 route_theorem(const GaussInputs& in) {
  Curv4 out = intrinsic::lower_last(*in.riemann_I, in.obata->III0, MetricTag::third);
  Curv4 p4 = intrinsic::lower_last(in.aux->P, in.obata->III0, MetricTag::third);
  VBilinear tv = conn_as_bilinear(*in.T);
  Curv4 tt = generalized_kn(tv, tv, in.obata->III0, MetricTag::third);
  for (std::size_t i = 0; i < out.s.size(); ++i) out.s[i] += p4.s[i] + tt.s[i];
  return out;
}

Curv4 route_kn(const GaussInputs& in) {
  Curv4 out = intrinsic::lower_last(*in.riemann_I, in.obata->III0, MetricTag::third);
  Curv4 l4 = intrinsic::lower_last(in.aux->L, in.obata->III0, MetricTag::third);
  VBilinear tv = conn_as_bilinear(*in.T);
  Curv4 tt = generalized_kn(tv, tv, in.obata->III0, MetricTag::third);
  for (std::size_t i = 0; i < out.s.size(); ++i) out.s[i] += l4.s[i] + tt.s[i];
  for (const auto& Jj : in.aux->J) {
    Curv4 jj = generalized_kn(Jj, Jj, in.obata->III0, MetricTag::third);
    for (std::size_t i = 0; i < out.s.size(); ++i) out.s[i] -= jj.s[i];
  }
  return out;
}

Curv4 route_nabla_t(const GaussInputs& in) {
  const int n = in.shape->n();
  if (in.T->T.empty() || in.T->T[0].order() < 1)
    throw Error("nabla-T route needs T with first-derivative jets");

  std::vector<Mat> gamma0(n);
  for (int a = 0; a < n; ++a) gamma0[a] = in.shape->christoffel[a].values();

  // covariant derivative of T as a (1,2) tensor field
  auto nabla_T = [&](int a, int b, int z, int d) {
    double v = in.T->T[b].at(d, z).deriv({a});
    for (int e = 0; e < n; ++e) {
      v += gamma0[a](d, e) * in.T->T0[b](e, z);
      v -= gamma0[a](e, b) * in.T->T0[e](d, z);
      v -= gamma0[a](e, z) * in.T->T0[b](d, e);
    }
    return v;
  };

  Ten13 r13(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int z = 0; z < n; ++z)
        for (int d = 0; d < n; ++d) {
          double v = in.riemann_I->at(a, b, z, d) + nabla_T(a, b, z, d) - nabla_T(b, a, z, d);
          for (int e = 0; e < n; ++e)
            v += in.T->T0[a](d, e) * in.T->T0[b](e, z) - in.T->T0[b](d, e) * in.T->T0[a](e, z);
          r13.at(a, b, z, d) = v;
        }
  return intrinsic::lower_last(r13, in.obata->III0, MetricTag::third);
}

}  // namespace

Curv4 gauss_image_curvature(Route route, const GaussInputs& in) {
  switch (route) {
    case Route::theorem: return route_theorem(in);
    case Route::kn: return route_kn(in);
    case Route::nabla_t: return route_nabla_t(in);
  }
  throw Error("unknown curvature route");
}

double gauss_image_scalar_formula(const GeometryJet& geom, const ShapeData& shape,
                                  const ObataData& ob, const ConnDiff& T, const AuxTensors& aux) {
  const int n = shape.n();
  const double k = geom.model.k;

  double out = k * (n - 1) * ob.sigma_nm1 / ob.det - n;

  // tr_III of an operator is sum_nu <B V_nu, V_nu> in the g-inner product
  // over the III-orthonormal V_nu, not the plain matrix trace.
  for (int nu = 0; nu < n; ++nu)
    out += ob.V.col(nu).dot(geom.g0 * (shape.A_H * ob.V.col(nu)));

  Vec trT = Vec::Zero(n);
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      Vec t = T.apply(ob.V.col(mu), ob.V.col(nu));
      out += t.dot(ob.III0 * t);  // ||T||^2_III
    }
    trT += T.apply(ob.V.col(mu), ob.V.col(mu));
  }
  out -= trT.dot(ob.III0 * trT);

  // tr_III tr_c P = sum_{nu,mu} <P(U_mu, V_nu) V_nu, U_mu>_g
  for (int nu = 0; nu < n; ++nu)
    for (int mu = 0; mu < n; ++mu) {
      Vec pv = Vec::Zero(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int z = 0; z < n; ++z) {
            double w = ob.U(a, mu) * ob.V(b, nu) * ob.V(z, nu);
            if (w == 0.0) continue;
            for (int d = 0; d < n; ++d) pv[d] += w * aux.P.at(a, b, z, d);
          }
      out += ob.U.col(mu).dot(geom.g0 * pv);
    }
  return out;
}

double gauss_image_scalar_contraction(const Curv4& r3, const Mat& III) {
  Ten13 r13 = intrinsic::raise_last(r3, III.inverse());
  auto [ric, scalar] = intrinsic::ricci_scalar(r13, III);
  return scalar;
}

double gauss_equation_residual(const ShapeData& shape, const GeometryJet& geom,
                               const Ten13& riemann_I) {
  const int n = shape.n();
  const int m = shape.m();
  double k = geom.model.k;

  VBilinear ii(n, m);
  for (int j = 0; j < m; ++j) {
    Mat II0 = shape.II[j].values();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) ii.at(j, a, b) = II0(a, b);
  }
  Curv4 kn = generalized_kn(ii, ii, Mat::Identity(m, m), MetricTag::first);
  Curv4 r4 = intrinsic::lower_last(riemann_I, geom.g0, MetricTag::first);

  double worst = 0.0, scale = 1.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int z = 0; z < n; ++z)
        for (int v = 0; v < n; ++v) {
          double lhs = k * (geom.g0(b, z) * geom.g0(a, v) - geom.g0(a, z) * geom.g0(b, v));
          double rhs = r4.at(a, b, z, v) + kn.at(a, b, z, v);
          worst = std::max(worst, std::abs(lhs - rhs));
          scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
        }
  return worst / scale;
}

}  // namespace gim::gaussmap
