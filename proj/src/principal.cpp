#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gim/errors.hpp"
#include "gim/immersion.hpp"
#include "gim/rng.hpp"

namespace gim::immersion {

namespace {

// Cluster eigenvalue functions m_i(u) as jets from the power sums
// tr(M^r) = sum_i d_i m_i^r, solved by Newton in jet arithmetic starting
// from the pointwise eigenvalues. Assumes the cluster structure is locally
// stable, which the separation gate guarantees at checked points.
std::vector<Jet> cluster_eigenvalue_jets(const JMat& M, const std::vector<int>& dims,
                                         const Vec& means) {
  const int s = static_cast<int>(dims.size());
  auto layout = M.layout();
  if (s == 1) {
    Jet t = jmat_trace(M);
    return {t / static_cast<double>(dims[0])};
  }

  std::vector<Jet> power_sums;  // tr(M^r), r = 1..s
  JMat acc = M;
  for (int r = 1; r <= s; ++r) {
    power_sums.push_back(jmat_trace(acc));
    if (r < s) acc = jmat_mul(acc, M);
  }

  std::vector<Jet> m(s, Jet(layout));
  for (int i = 0; i < s; ++i) m[i] = Jet::constant(layout, means[i]);

  for (int iter = 0; iter < 5; ++iter) {
    JMat jac(s, s, layout);
    std::vector<Jet> f(s, Jet(layout));
    for (int r = 1; r <= s; ++r) {
      Jet fr(layout);
      for (int i = 0; i < s; ++i) {
        Jet p = pow(m[i], r);
        fr += static_cast<double>(dims[i]) * p;
        jac.at(r - 1, i) = static_cast<double>(dims[i] * r) * pow(m[i], r - 1);
      }
      f[r - 1] = fr - power_sums[r - 1];
    }
    JMat jinv = jmat_inverse(jac);
    std::vector<Jet> delta = jmat_vec(jinv, f);
    for (int i = 0; i < s; ++i) m[i] -= delta[i];
  }
  return m;
}

}  // namespace

PrincipalDecomp principal_decomposition(const ShapeData& shape, const GeometryJet& geom,
                                        double gap_threshold, std::uint64_t seed) {
  const int n = shape.n();
  const int m = shape.m();
  auto layout = shape.A[0].layout();

  PrincipalDecomp best;
  for (int attempt = 0; attempt < 3; ++attempt) {
    Rng rng(Rng::derive(seed, 0xA11CE + attempt));
    Vec c = rng.unit_vector(m);

    JMat M(n, n, layout);
    for (int j = 0; j < m; ++j) M = jmat_add(M, jmat_scale(shape.A[j], c[j]));
    Mat M0 = M.values();

    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(geom.g0 * M0, geom.g0);
    Vec eigs = ges.eigenvalues();
    Mat U = ges.eigenvectors();  // g-orthonormal columns, ascending eigenvalues

    // group adjacent eigenvalues within gap_threshold
    std::vector<std::vector<int>> groups;
    for (int mu = 0; mu < n; ++mu) {
      if (!groups.empty() && eigs[mu] - eigs[groups.back().back()] < gap_threshold)
        groups.back().push_back(mu);
      else
        groups.push_back({mu});
    }

    PrincipalDecomp decomp;
    decomp.s = static_cast<int>(groups.size());
    decomp.combo_coeff = c;
    decomp.ambiguous = false;

    std::vector<int> dims;
    Vec means(decomp.s);
    for (int i = 0; i < decomp.s; ++i) {
      PrincipalCluster cluster;
      cluster.dim = static_cast<int>(groups[i].size());
      dims.push_back(cluster.dim);
      double mean = 0.0;
      for (int mu : groups[i]) mean += eigs[mu];
      means[i] = mean / cluster.dim;

      cluster.proj0 = Mat::Zero(n, n);
      for (int mu : groups[i])
        cluster.proj0 += U.col(mu) * (geom.g0 * U.col(mu)).transpose();

      cluster.lambda.assign(m, 0.0);
      for (int j = 0; j < m; ++j) {
        Mat Aj = shape.A[j].values();
        double acc = 0.0, spread = 0.0;
        for (int mu : groups[i]) acc += U.col(mu).dot(geom.g0 * (Aj * U.col(mu)));
        acc /= cluster.dim;
        for (int mu : groups[i])
          spread = std::max(spread, std::abs(U.col(mu).dot(geom.g0 * (Aj * U.col(mu))) - acc));
        if (spread > 100 * gap_threshold) decomp.ambiguous = true;
        cluster.lambda[j] = acc;
      }
      decomp.clusters.push_back(std::move(cluster));
    }

    decomp.cluster_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < decomp.s; ++i)
      for (int l = i + 1; l < decomp.s; ++l)
        decomp.cluster_gap = std::min(decomp.cluster_gap, (decomp.eta(i) - decomp.eta(l)).norm());
    if (decomp.cluster_gap < gap_threshold) decomp.ambiguous = true;

    if (!decomp.ambiguous) {
      // jet fields: eigenvalue functions, Lagrange projectors, principal curvatures
      std::vector<Jet> mjets = cluster_eigenvalue_jets(M, dims, means);
      for (int i = 0; i < decomp.s; ++i) {
        JMat P = jmat_identity(n, layout);
        for (int l = 0; l < decomp.s; ++l) {
          if (l == i) continue;
          JMat shifted = M;
          for (int d = 0; d < n; ++d) shifted.at(d, d) -= mjets[l];
          P = jmat_mul(P, jmat_scale(shifted, inv(mjets[i] - mjets[l])));
        }
        decomp.clusters[i].proj = P;

        decomp.clusters[i].lambda_jets.clear();
        Jet eta_sq(layout);
        for (int j = 0; j < m; ++j) {
          Jet lam = jmat_trace(jmat_mul(P, shape.A[j])) / static_cast<double>(dims[i]);
          eta_sq += lam * lam;
          decomp.clusters[i].lambda_jets.push_back(lam);
        }
        // a vanishing principal normal (relative nullity) has no log||eta||;
        // the T formulas that need it are gated on W-regularity upstream
        if (eta_sq.value() > 1e-14)
          decomp.clusters[i].log_eta_norm = log(eta_sq) * 0.5;
      }
      return decomp;
    }
    best = std::move(decomp);
  }
  return best;  // ambiguous after retries; principal-formula paths stay disabled
}

double covariant_principal_residual(const ShapeData& shape, const GeometryJet& geom,
                                    const PrincipalDecomp& decomp, std::uint64_t seed) {
  if (decomp.ambiguous) throw ClusterError(decomp.cluster_gap, "clusters unresolved");
  const int n = shape.n();
  const int m = shape.m();
  Rng rng(Rng::derive(seed, 0xC0DA));
  Vec xi = rng.unit_vector(m);

  // dA at the direction xi (parallel extension of a fixed frame combination)
  std::vector<Mat> dAxi(n);
  for (int a = 0; a < n; ++a) {
    dAxi[a] = Mat::Zero(n, n);
    for (int j = 0; j < m; ++j) dAxi[a] += xi[j] * shape.dA[a][j].values();
  }

  // lambda_j(xi) along a parallel xi: d_a <eta_j, xi> = sum_l xi_l ( d_a lambda_jl
  // + sum_p lambda_jp s_apl )
  const int s = decomp.s;
  Mat dlam(s, n);
  for (int i = 0; i < s; ++i)
    for (int a = 0; a < n; ++a) {
      double acc = 0.0;
      for (int l = 0; l < m; ++l) {
        double v = decomp.clusters[i].lambda_jets[l].deriv({a});
        for (int p = 0; p < m; ++p)
          v += decomp.clusters[i].lambda[p] * shape.s[a][p][l].value();
        acc += xi[l] * v;
      }
      dlam(i, a) = acc;
    }

  std::vector<Mat> gamma0(n);
  for (int a = 0; a < n; ++a) gamma0[a] = shape.christoffel[a].values();

  double worst = 0.0, scale = 1.0;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      for (int k = 0; k < s; ++k)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc) {
              Vec X = decomp.clusters[i].proj0.col(a);
              Vec Y = decomp.clusters[j].proj0.col(b);
              Vec Z = decomp.clusters[k].proj0.col(cc);
              if (X.norm() < 1e-9 || Y.norm() < 1e-9 || Z.norm() < 1e-9) continue;

              Mat dA_X = Mat::Zero(n, n);
              for (int d = 0; d < n; ++d) dA_X += X[d] * dAxi[d];
              double lhs = Z.dot(geom.g0 * (dA_X * Y));

              double rhs;
              if (j != k) {
                double coef = xi.dot(decomp.eta(j) - decomp.eta(k));
                // covariant derivative of the E_j-valued field P_j e_b along X
                Vec D = Vec::Zero(n);
                for (int d = 0; d < n; ++d) {
                  Vec col(n);
                  for (int r = 0; r < n; ++r) col[r] = decomp.clusters[j].proj.at(r, b).deriv({d});
                  D += X[d] * (col + gamma0[d] * decomp.clusters[j].proj0.col(b));
                }
                rhs = coef * Z.dot(geom.g0 * D);
              } else {
                double xlam = dlam.row(j).dot(X);
                rhs = xlam * Z.dot(geom.g0 * Y);
              }
              worst = std::max(worst, std::abs(lhs - rhs));
              scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
            }
  return worst / scale;
}

}  // namespace gim::immersion
