#pragma once

#include "gim/immersion.hpp"
#include "gim/intrinsic.hpp"

namespace gim::gaussmap {

using immersion::GeometryJet;
using immersion::PrincipalDecomp;
using immersion::ShapeData;
using intrinsic::Curv4;
using intrinsic::MetricTag;
using intrinsic::Ten13;

/// Obata operator W = sum_j A_j^2 with its eigen-structure in the g-inner
/// product and the third fundamental form III = <W., .>. V-columns are the
/// III-orthonormal vectors U_mu / sqrt(w_mu).
struct ObataData {
  JMat W;    // jets, order K-2
  JMat III;  // jets, order K-2
  Mat W0, III0, Winv0, Winvhalf0;
  Vec w;   // eigenvalues, ascending
  Mat U;   // g-orthonormal eigenvector columns
  Mat V;   // III-orthonormal columns
  double sigma_nm1 = 0.0, det = 0.0;
};

ObataData obata(const ShapeData& shape, const GeometryJet& geom);

/// Residual of W = k(n-1) Id + A_H - Ric-operator, with Ricci supplied by the
/// coordinate oracle on g.
double obata_identity_residual(const ObataData& ob, const ShapeData& shape, const Mat& ricci_I,
                               double k, const GeometryJet& geom);

/// Connection difference T = nabla^(III) - nabla^(I), components T^c_{ab}.
struct ConnDiff {
  std::vector<JMat> T;   // per first slot a: T[a](c, b) = T^c_{ab}; jets or values
  std::vector<Mat> T0;

  Vec apply(const Vec& X, const Vec& Y) const {
    Vec out = Vec::Zero(T0[0].rows());
    for (std::size_t a = 0; a < T0.size(); ++a) out += X[static_cast<int>(a)] * (T0[a] * Y);
    return out;
  }
};

/// T from the Weingarten formula T(X,Y) = W^-1 sum_j A_j (nabla_X A_j) Y.
ConnDiff connection_difference(const ShapeData& shape, const ObataData& ob);

/// T assembled from principal curvatures and principal normal vectors;
/// requires well-separated clusters.
ConnDiff connection_difference_principal(const PrincipalDecomp& decomp, const ShapeData& shape,
                                         const GeometryJet& geom);

/// T from the connection oracle: Christoffel(III) - Christoffel(I).
ConnDiff connection_difference_oracle(const ObataData& ob, const GeometryJet& geom);

/// Vector-valued symmetric bilinear form, components c(e, a, b) in a value
/// space of dimension edim with inner product `inner`.
struct VBilinear {
  int n = 0, edim = 0;
  std::vector<double> c;

  VBilinear() = default;
  VBilinear(int n_, int edim_) : n(n_), edim(edim_), c(static_cast<std::size_t>(edim_) * n_ * n_, 0.0) {}
  double& at(int e, int a, int b) { return c[(static_cast<std::size_t>(e) * n + a) * n + b]; }
  double at(int e, int a, int b) const { return c[(static_cast<std::size_t>(e) * n + a) * n + b]; }
};

/// Generalized Kulkarni-Nomizu product of two vector-valued symmetric
/// bilinear forms over (E, inner), with the 1/2 symmetrization.
Curv4 generalized_kn(const VBilinear& h, const VBilinear& k, const Mat& inner, MetricTag tag);

/// Reading of the printed summand "A_j R(X,Y) A_j": the commutator reading
/// A_j [R(X,Y), A_j] (shipped default, forced by the round-sphere check) or
/// the literal composition A_j R(X,Y) A_j (kept behind the debug flag).
enum class PReading { commutator, literal };

struct AuxTensors {
  Ten13 P;  // P(X,Y)Z components
  Ten13 L;
  std::vector<VBilinear> J;  // J_j(X,Y) = W^-1/2 (nabla_X A_j) Y
};

AuxTensors build_aux_tensors(const ShapeData& shape, const ObataData& ob, const Ten13& riemann_I,
                             PReading reading = PReading::commutator);

enum class Route { theorem, kn, nabla_t };

struct GaussInputs {
  const GeometryJet* geom = nullptr;
  const ShapeData* shape = nullptr;
  const ObataData* obata = nullptr;
  const ConnDiff* T = nullptr;
  const AuxTensors* aux = nullptr;
  const Ten13* riemann_I = nullptr;
};

/// III-lowered curvature tensor of the Gauss image by the chosen route.
Curv4 gauss_image_curvature(Route route, const GaussInputs& in);

/// Scalar curvature of the Gauss image from the closed formula.
double gauss_image_scalar_formula(const GeometryJet& geom, const ShapeData& shape,
                                  const ObataData& ob, const ConnDiff& T, const AuxTensors& aux);

/// Scalar curvature as the double III-trace of a curvature tensor.
double gauss_image_scalar_contraction(const Curv4& r3, const Mat& III);

/// Residual of the Gauss equation written with the generalized KN product:
/// <Rbar(X,Y)Z,V> = <R(X,Y)Z,V> + (II kn_perp II)(X,Y,Z,V).
double gauss_equation_residual(const ShapeData& shape, const GeometryJet& geom,
                               const Ten13& riemann_I);

}  // namespace gim::gaussmap
