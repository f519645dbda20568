#include "gim/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gim/errors.hpp"
#include "gim/intrinsic.hpp"
#include "gim/rng.hpp"

namespace gim::immersion {

using spaceform::AmbientModel;

namespace {

JVec constant_axis(const std::shared_ptr<const JetLayout>& layout, int dim, int axis) {
  JVec v(dim, Jet(layout));
  v[axis] += 1.0;
  return v;
}

// g-orthonormalization of the tangent fields, used only to complete the
// normal frame; the metric itself stays in the coordinate basis.
std::vector<JVec> orthonormal_tangents(const AmbientModel& model, const std::vector<JVec>& t) {
  std::vector<JVec> tau;
  for (const auto& field : t) {
    JVec r = field;
    for (const auto& prev : tau) {
      Jet c = spaceform::ambient_inner(model, r, prev);
      r = jvec_sub(r, jvec_scale(prev, c));
    }
    Jet nn = spaceform::ambient_inner(model, r, r);
    if (nn.value() <= 1e-20) throw RankError(nn.value(), "tangent frame degenerate");
    tau.push_back(jvec_scale(r, inv(sqrt(nn))));
  }
  return tau;
}

}  // namespace

GeometryJet evaluate_geometry(const std::vector<expr::ExprAst>& coords, const AmbientModel& model,
                              const Vec& u0, int order) {
  const int D = model.chart_dim();
  const int n = static_cast<int>(u0.size());
  const int m = model.dim - n;
  if (static_cast<int>(coords.size()) != D) {
    std::ostringstream os;
    os << "scenario provides " << coords.size() << " coordinate expressions but the "
       << spaceform::kind_name(model.kind) << " chart has dimension " << D;
    throw ValidationError(os.str(), "coords");
  }
  if (m < 1) throw ValidationError("ambient dimension must exceed the parameter count", "n");
  if (order < 3 || order > 4) throw Error("geometry evaluation supports orders 3 and 4");

  GeometryJet geom;
  geom.model = model;
  geom.n = n;
  geom.order = order;
  geom.u0 = u0;

  std::vector<double> base(u0.data(), u0.data() + n);
  geom.x.reserve(D);
  for (const auto& ast : coords) geom.x.push_back(expr::eval_jet(ast, base, order));

  Vec x0 = jvec_values(geom.x);
  double residual = spaceform::constraint_residual(model, x0);
  if (residual > spaceform::kOnModelTol) {
    std::ostringstream os;
    os << "immersion point is off the " << spaceform::kind_name(model.kind)
       << " model: residual " << residual;
    throw ModelError(residual, os.str());
  }
  if (model.kind == spaceform::Kind::hyperbolic && x0[0] <= 0)
    throw ModelError(x0[0], "hyperboloid points must have positive first coordinate");

  geom.tangent.resize(n);
  for (int a = 0; a < n; ++a) {
    geom.tangent[a].reserve(D);
    for (int c = 0; c < D; ++c) geom.tangent[a].push_back(geom.x[c].derivative(a));
  }

  auto layout = geom.tangent[0][0].layout();
  geom.g = JMat(n, n, layout);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      geom.g.at(a, b) = spaceform::ambient_inner(model, geom.tangent[a], geom.tangent[b]);
  geom.g0 = geom.g.values();

  Eigen::SelfAdjointEigenSolver<Mat> es(geom.g0);
  double g_min = es.eigenvalues().minCoeff();
  if (g_min < kRankEigenFloor) {
    std::ostringstream os;
    os << "immersion is rank deficient: least metric eigenvalue " << g_min;
    throw RankError(g_min, os.str());
  }

  // Complete the frame over the orthogonal complement of the tangent space
  // inside the model tangent space. Seeds are chart axes (projected into
  // {<x,v> = 0} for quadrics), pivoted by largest residual norm at the base
  // point; the pivot order is frozen per point.
  JVec xt = jvec_truncated(geom.x, order - 1);
  auto tau = orthonormal_tangents(model, geom.tangent);
  std::vector<JVec> seeds;
  for (int axis = 0; axis < D; ++axis) {
    JVec s = constant_axis(layout, D, axis);
    if (model.quadric()) s = spaceform::tangent_project(model, xt, s);
    seeds.push_back(std::move(s));
  }

  std::vector<bool> used(D, false);
  for (int j = 0; j < m; ++j) {
    int best = -1;
    double best_norm = -1.0;
    Vec values_best;
    for (int axis = 0; axis < D; ++axis) {
      if (used[axis]) continue;
      Vec r = jvec_values(seeds[axis]);
      for (const auto& tv : tau) {
        Vec t0 = jvec_values(tv);
        r -= spaceform::ambient_inner(model, r, t0) * t0;
      }
      for (const auto& xi : geom.normal) {
        Vec q0 = jvec_values(xi);
        r -= spaceform::ambient_inner(model, r, q0) * q0;
      }
      double nn = spaceform::ambient_inner(model, r, r);
      if (nn > best_norm) {
        best_norm = nn;
        best = axis;
      }
    }
    if (best < 0 || best_norm < 1e-12)
      throw RankError(best_norm, "cannot complete the normal frame");
    used[best] = true;
    JVec r = seeds[best];
    for (const auto& tv : tau) {
      Jet c = spaceform::ambient_inner(model, r, tv);
      r = jvec_sub(r, jvec_scale(tv, c));
    }
    for (const auto& xi : geom.normal) {
      Jet c = spaceform::ambient_inner(model, r, xi);
      r = jvec_sub(r, jvec_scale(xi, c));
    }
    Jet nn = spaceform::ambient_inner(model, r, r);
    geom.normal.push_back(jvec_scale(r, inv(sqrt(nn))));
  }

  // construction invariants at the base point
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < m; ++j) {
      double ip = spaceform::ambient_inner(model, jvec_values(geom.tangent[a]),
                                           jvec_values(geom.normal[j]));
      if (std::abs(ip) > kFrameTol) throw Error("normal frame is not orthogonal to tangents");
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double ip = spaceform::ambient_inner(model, jvec_values(geom.normal[i]),
                                           jvec_values(geom.normal[j]));
      if (std::abs(ip - (i == j ? 1.0 : 0.0)) > kFrameTol)
        throw Error("normal frame is not orthonormal");
    }
  if (model.quadric()) {
    for (int a = 0; a < n; ++a)
      if (std::abs(spaceform::ambient_inner(model, x0, jvec_values(geom.tangent[a]))) > kFrameTol)
        throw Error("tangents are not tangent to the quadric");
    for (int j = 0; j < m; ++j)
      if (std::abs(spaceform::ambient_inner(model, x0, jvec_values(geom.normal[j]))) > kFrameTol)
        throw Error("normals are not tangent to the quadric");
  }

  return geom;
}

namespace {

// dA[a][j] = d_a A_j + [Gamma_a, A_j] - sum_l s_{ajl} A_l, truncated one
// order below A. This is the parallel-frame covariant derivative expressed
// at the computed (generally non-parallel) frame.
std::vector<std::vector<JMat>> corrected_derivatives(const std::vector<JMat>& A,
                                                     const std::vector<std::vector<std::vector<Jet>>>& s,
                                                     const std::vector<JMat>& gamma) {
  const int m = static_cast<int>(A.size());
  const int n = A[0].rows;
  const int ord = A[0].order() - 1;
  std::vector<std::vector<JMat>> dA(n, std::vector<JMat>(m));
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < m; ++j) {
      JMat d(n, n, JetLayout::get(A[0].layout()->nvars(), ord));
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) d.at(r, c) = A[j].at(r, c).derivative(a);
      JMat At = A[j].truncated(ord);
      JMat Gt = gamma[a].truncated(ord);
      d = jmat_add(d, jmat_sub(jmat_mul(Gt, At), jmat_mul(At, Gt)));
      for (int l = 0; l < m; ++l)
        d = jmat_sub(d, jmat_scale(A[l].truncated(ord), s[a][j][l].truncated(ord)));
      dA[a][j] = std::move(d);
    }
  return dA;
}

double normal_curvature_from_s(const std::vector<std::vector<std::vector<Jet>>>& s, int n, int m) {
  if (m == 1) return 0.0;
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) {
          double comp = s[b][j][l].deriv({a}) - s[a][j][l].deriv({b});
          for (int p = 0; p < m; ++p)
            comp += s[b][j][p].value() * s[a][p][l].value() -
                    s[a][j][p].value() * s[b][p][l].value();
          worst = std::max(worst, std::abs(comp));
        }
  return worst;
}

}  // namespace

ShapeData shape_operators(const GeometryJet& geom) {
  const int n = geom.n;
  const int m = geom.m();
  const int ord = geom.order - 2;
  auto layout = JetLayout::get(n, ord);

  ShapeData shape;
  shape.christoffel = intrinsic::christoffel_jets(geom.g);

  // Pairing the raw second derivatives with the frame equals pairing the
  // model-projected ones: the frame is orthogonal to x and to the tangents.
  std::vector<JVec> xi(m);
  for (int j = 0; j < m; ++j) xi[j] = jvec_truncated(geom.normal[j], ord);

  shape.II.assign(m, JMat(n, n, layout));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      JVec hess(geom.D());
      for (int c = 0; c < geom.D(); ++c) hess[c] = geom.tangent[a][c].derivative(b);
      for (int j = 0; j < m; ++j) {
        Jet v = spaceform::ambient_inner(geom.model, hess, xi[j]);
        shape.II[j].at(a, b) = v;
        shape.II[j].at(b, a) = v;
      }
    }

  JMat ginv = jmat_inverse(geom.g.truncated(ord));
  shape.A.reserve(m);
  for (int j = 0; j < m; ++j) shape.A.push_back(jmat_mul(ginv, shape.II[j]));

  shape.s.assign(n, std::vector<std::vector<Jet>>(m, std::vector<Jet>(m, Jet(layout))));
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < m; ++j) {
      JVec dxi(geom.D());
      for (int c = 0; c < geom.D(); ++c) dxi[c] = geom.normal[j][c].derivative(a);
      for (int l = 0; l < m; ++l)
        shape.s[a][j][l] = spaceform::ambient_inner(geom.model, dxi, xi[l]);
    }

  shape.dA = corrected_derivatives(shape.A, shape.s, shape.christoffel);

  shape.H = Vec(m);
  shape.A_H = Mat::Zero(n, n);
  for (int j = 0; j < m; ++j) {
    shape.H[j] = jmat_trace(shape.A[j]).value();
    shape.A_H += shape.H[j] * shape.A[j].values();
  }

  shape.normal_curvature_residual = normal_curvature_from_s(shape.s, n, m);
  return shape;
}

double normal_flatness(const ShapeData& shape) { return shape.normal_curvature_residual; }

double codazzi_residual(const ShapeData& shape, const GeometryJet& geom) {
  const int n = shape.n();
  const int m = shape.m();
  double scale = 1.0, worst = 0.0;
  std::vector<Mat> C(static_cast<std::size_t>(n) * m);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < m; ++j) {
      Mat M = geom.g0 * shape.dA[a][j].values();  // C(c,b) = <(nabla_a A_j) e_b, e_c>
      C[a * m + j] = M;
      scale = std::max(scale, M.lpNorm<Eigen::Infinity>());
    }
  for (int j = 0; j < m; ++j)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double cab = C[a * m + j](c, b);
          worst = std::max(worst, std::abs(cab - C[b * m + j](c, a)));
          worst = std::max(worst, std::abs(cab - C[a * m + j](b, c)));
        }
  return worst / scale;
}

int relative_nullity(const Mat& W) {
  Eigen::EigenSolver<Mat> es(W);
  Vec eigs = es.eigenvalues().real();
  double w_max = eigs.cwiseAbs().maxCoeff();
  if (w_max <= 1e-12) return static_cast<int>(W.rows());
  int count = 0;
  for (int i = 0; i < eigs.size(); ++i)
    if (eigs[i] < kNullityRatio * w_max) ++count;
  return count;
}

ShapeData mix_normal_frame(const ShapeData& shape, const GeometryJet& geom, const Mat& O) {
  (void)geom;
  const int n = shape.n();
  const int m = shape.m();
  if (O.rows() != m || O.cols() != m) throw Error("frame mix must be m x m");
  if (((O * O.transpose()) - Mat::Identity(m, m)).lpNorm<Eigen::Infinity>() > 1e-10)
    throw Error("frame mix must be orthogonal");

  ShapeData out;
  out.christoffel = shape.christoffel;
  auto layout = shape.A[0].layout();
  out.II.assign(m, JMat(n, n, layout));
  out.A.assign(m, JMat(n, n, layout));
  for (int l = 0; l < m; ++l)
    for (int j = 0; j < m; ++j) {
      out.II[l] = jmat_add(out.II[l], jmat_scale(shape.II[j], O(l, j)));
      out.A[l] = jmat_add(out.A[l], jmat_scale(shape.A[j], O(l, j)));
    }
  out.s.assign(n, std::vector<std::vector<Jet>>(m, std::vector<Jet>(m, Jet(layout))));
  for (int a = 0; a < n; ++a)
    for (int l = 0; l < m; ++l)
      for (int l2 = 0; l2 < m; ++l2) {
        Jet acc(layout);
        for (int j = 0; j < m; ++j)
          for (int j2 = 0; j2 < m; ++j2) acc += O(l, j) * O(l2, j2) * shape.s[a][j][j2];
        out.s[a][l][l2] = acc;
      }
  out.dA = corrected_derivatives(out.A, out.s, out.christoffel);
  out.H = Vec(m);
  out.A_H = Mat::Zero(n, n);
  for (int l = 0; l < m; ++l) {
    out.H[l] = jmat_trace(out.A[l]).value();
    out.A_H += out.H[l] * out.A[l].values();
  }
  out.normal_curvature_residual = normal_curvature_from_s(out.s, n, m);
  return out;
}

ShapeData mix_normal_frame(const ShapeData& shape, const GeometryJet& geom, const JMat& O) {
  (void)geom;
  const int n = shape.n();
  const int m = shape.m();
  if (O.rows != m || O.cols != m) throw Error("frame mix must be m x m");
  auto layout = shape.A[0].layout();
  if (O.order() < layout->order() + 1)
    throw Error("field mix needs one jet order above the shape data");
  JMat Ot(m, m, layout);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) Ot.at(r, c) = O.at(r, c).truncated(layout->order());

  ShapeData out;
  out.christoffel = shape.christoffel;
  out.II.assign(m, JMat(n, n, layout));
  out.A.assign(m, JMat(n, n, layout));
  for (int l = 0; l < m; ++l)
    for (int j = 0; j < m; ++j) {
      out.II[l] = jmat_add(out.II[l], jmat_scale(shape.II[j], Ot.at(l, j)));
      out.A[l] = jmat_add(out.A[l], jmat_scale(shape.A[j], Ot.at(l, j)));
    }
  // s'_{a l l'} = sum_j dO_lj O_l'j + sum_jj' O_lj O_l'j' s_ajj'
  out.s.assign(n, std::vector<std::vector<Jet>>(m, std::vector<Jet>(m, Jet(layout))));
  for (int a = 0; a < n; ++a)
    for (int l = 0; l < m; ++l)
      for (int l2 = 0; l2 < m; ++l2) {
        Jet acc(layout);
        for (int j = 0; j < m; ++j) {
          acc += O.at(l, j).derivative(a).truncated(layout->order()) * Ot.at(l2, j);
          for (int j2 = 0; j2 < m; ++j2)
            acc += Ot.at(l, j) * Ot.at(l2, j2) * shape.s[a][j][j2];
        }
        out.s[a][l][l2] = acc;
      }
  out.dA = corrected_derivatives(out.A, out.s, out.christoffel);
  out.H = Vec(m);
  out.A_H = Mat::Zero(n, n);
  for (int l = 0; l < m; ++l) {
    out.H[l] = jmat_trace(out.A[l]).value();
    out.A_H += out.H[l] * out.A[l].values();
  }
  out.normal_curvature_residual = normal_curvature_from_s(out.s, n, m);
  return out;
}

}  // namespace gim::immersion
