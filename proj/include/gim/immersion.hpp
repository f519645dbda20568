#pragma once

#include <cstdint>
#include <vector>

#include "gim/expr.hpp"
#include "gim/linalg.hpp"
#include "gim/spaceform.hpp"

namespace gim::immersion {

/// Thresholds for the regularity gates.
inline constexpr double kFrameTol = 1e-11;        // frame orthonormality at the base point
inline constexpr double kRankEigenFloor = 1e-10;  // least eigenvalue of g
inline constexpr double kNullityRatio = 1e-8;     // w_min >= ratio * w_max for invertibility

/// Jets of the immersion at one parameter point: chart components of x, the
/// coordinate tangent fields, an orthonormal normal frame completed inside the
/// model tangent space, and the first fundamental form. Orders: x carries the
/// full evaluation order K, tangents/normals K-1, derived forms K-2.
struct GeometryJet {
  spaceform::AmbientModel model;
  int n = 0;
  int order = 0;
  Vec u0;
  JVec x;                           // D components, order K
  std::vector<JVec> tangent;        // n fields, order K-1
  std::vector<JVec> normal;         // m fields, order K-1
  JMat g;                           // order K-1
  Mat g0;

  int D() const { return model.chart_dim(); }
  int m() const { return model.dim - n; }
};

GeometryJet evaluate_geometry(const std::vector<expr::ExprAst>& coords,
                              const spaceform::AmbientModel& model, const Vec& u0, int order = 4);

/// Extrinsic state at the point. A[j] are the Weingarten matrices in the
/// coordinate basis (index raised with g); dA[a][j] is the covariant
/// derivative corrected by the normal connection, i.e. the parallel-frame
/// derivative of the operators expressed in this frame:
///   dA_aj = d_a A_j + [Gamma_a, A_j] - sum_l s_{ajl} A_l.
struct ShapeData {
  std::vector<JMat> II;                          // m matrices II^j_{ab}, order K-2
  std::vector<JMat> A;                           // m matrices, order K-2
  std::vector<std::vector<std::vector<Jet>>> s;  // s[a][j][l], order K-2
  std::vector<JMat> christoffel;                 // Gamma_a, order K-2
  std::vector<std::vector<JMat>> dA;             // dA[a][j], order K-3
  Vec H;                                         // frame components of the mean curvature vector
  Mat A_H;                                       // Weingarten operator at H
  double normal_curvature_residual = 0.0;        // max |R-perp| component

  int n() const { return II.empty() ? 0 : II[0].rows; }
  int m() const { return static_cast<int>(II.size()); }
};

ShapeData shape_operators(const GeometryJet& geom);

/// Max |R-perp| component, assembled from ds + s^s; exactly 0 for m = 1.
double normal_flatness(const ShapeData& shape);

/// Max residual of the Codazzi symmetry <(nabla_a A_j) e_b, e_c> over index
/// swaps (a,b) and (b,c), relative to the magnitude of the components.
double codazzi_residual(const ShapeData& shape, const GeometryJet& geom);

/// Count of eigenvalues of W below the relative singularity threshold.
int relative_nullity(const Mat& W);

/// Apply a constant orthogonal mix O to the normal frame data: A, s, H, dA
/// are rebuilt for the frame xi'_l = sum_j O_lj xi_j. Frame-summed objects
/// must be invariant under this.
ShapeData mix_normal_frame(const ShapeData& shape, const GeometryJet& geom, const Mat& O);

/// Position-dependent mix: O is a field of orthogonal matrices given as jets;
/// the normal-connection coefficients pick up the dO terms.
ShapeData mix_normal_frame(const ShapeData& shape, const GeometryJet& geom, const JMat& O);

/// One joint eigenspace E_i of the Weingarten family, with the fields needed
/// by the principal-curvature formulas: the projector onto E_i and the
/// principal curvatures lambda_i(xi_j), both as jet fields.
struct PrincipalCluster {
  int dim = 0;
  Mat proj0;
  std::vector<double> lambda;   // per normal direction j
  JMat proj;                    // projector field, order >= 1
  std::vector<Jet> lambda_jets; // order >= 1
  Jet log_eta_norm;             // log ||eta_i||, order >= 1
};

struct PrincipalDecomp {
  int s = 0;
  std::vector<PrincipalCluster> clusters;
  double cluster_gap = 0.0;  // min over cluster pairs of ||eta_i - eta_k||_2
  bool ambiguous = false;
  Vec combo_coeff;  // the seeded generic combination used

  Vec eta(int i) const {
    Vec e(static_cast<int>(clusters[i].lambda.size()));
    for (int j = 0; j < e.size(); ++j) e[j] = clusters[i].lambda[j];
    return e;
  }
};

/// Joint eigen-decomposition of the Weingarten family via a seeded generic
/// combination, clustered at gap_threshold. Requires normal flatness.
PrincipalDecomp principal_decomposition(const ShapeData& shape, const GeometryJet& geom,
                                        double gap_threshold, std::uint64_t seed);

/// Residual of the principal-curvature expansion of <(nabla_X A_xi) Y, Z>
/// against the computed shape derivatives, probed with coordinate vectors
/// projected into the clusters and a seeded normal direction xi.
double covariant_principal_residual(const ShapeData& shape, const GeometryJet& geom,
                                    const PrincipalDecomp& decomp, std::uint64_t seed);

}  // namespace gim::immersion
