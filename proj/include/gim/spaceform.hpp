#pragma once

#include <string>

#include "gim/linalg.hpp"

namespace gim::spaceform {

enum class Kind { euclidean, sphere, hyperbolic };

const char* kind_name(Kind k);

/// The ambient space form M(k)^dim realized in a flat chart: R^dim for
/// k = 0, the quadric <x,x> = 1/k in R^(dim+1) for k > 0 (round sphere of
/// radius 1/sqrt(k)), and the upper hyperboloid sheet <x,x> = 1/k in
/// Minkowski space with signature (-,+,...,+) for k < 0.
struct AmbientModel {
  Kind kind = Kind::euclidean;
  double k = 0.0;
  int dim = 0;  // space form dimension n + m

  int chart_dim() const { return kind == Kind::euclidean ? dim : dim + 1; }
  bool quadric() const { return kind != Kind::euclidean; }
  double signature(int axis) const {
    return (kind == Kind::hyperbolic && axis == 0) ? -1.0 : 1.0;
  }

  static AmbientModel euclidean(int dim);
  static AmbientModel sphere(double k, int dim);
  static AmbientModel hyperbolic(double k, int dim);
  static AmbientModel make(Kind kind, double k, int dim);
};

/// Default absolute tolerance for |<x,x> - 1/k| when requiring a point to
/// lie on the quadric; beyond this the scenario itself is wrong.
inline constexpr double kOnModelTol = 1e-9;

double ambient_inner(const AmbientModel& model, const Vec& v, const Vec& w);
Jet ambient_inner(const AmbientModel& model, const JVec& v, const JVec& w);

/// |<x,x> - 1/k| for quadric models; 0 for euclidean.
double constraint_residual(const AmbientModel& model, const Vec& x);

/// Projection of a chart vector onto the tangent space of the model at x:
/// identity for euclidean, v - (<v,x>/<x,x>) x for quadrics.
Vec tangent_project(const AmbientModel& model, const Vec& x, const Vec& v);
JVec tangent_project(const AmbientModel& model, const JVec& x, const JVec& v);

/// Constant-curvature tensor R(X,Y)Z = k (g(Y,Z) X - g(X,Z) Y) for tangent
/// vectors expressed in a basis with Gram matrix `inner`.
Vec spaceform_curvature(const AmbientModel& model, const Mat& inner, const Vec& X, const Vec& Y,
                        const Vec& Z);

}  // namespace gim::spaceform
