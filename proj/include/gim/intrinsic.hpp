#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gim/linalg.hpp"

namespace gim::intrinsic {

/// Which metric lowers the last slot of a (0,4) curvature tensor.
enum class MetricTag { first, third, other };

/// Dense (1,3) curvature tensor, components r(x,y,z,d) of R(e_x,e_y)e_z = sum_d r(...) e_d.
struct Ten13 {
  int n = 0;
  std::vector<double> v;

  Ten13() = default;
  explicit Ten13(int n_) : n(n_), v(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0.0) {}
  double& at(int x, int y, int z, int d) { return v[((static_cast<std::size_t>(x) * n + y) * n + z) * n + d]; }
  double at(int x, int y, int z, int d) const { return v[((static_cast<std::size_t>(x) * n + y) * n + z) * n + d]; }
  double max_abs() const;
};

/// Dense (0,4) tensor, components s(x,y,z,v) = metric(R(e_x,e_y)e_z, e_v),
/// tagged with the lowering metric.
struct Curv4 {
  int n = 0;
  MetricTag tag = MetricTag::other;
  std::vector<double> s;

  Curv4() = default;
  Curv4(int n_, MetricTag tag_) : n(n_), tag(tag_), s(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0.0) {}
  double& at(int x, int y, int z, int v) { return s[((static_cast<std::size_t>(x) * n + y) * n + z) * n + v]; }
  double at(int x, int y, int z, int v) const { return s[((static_cast<std::size_t>(x) * n + y) * n + z) * n + v]; }
  double max_abs() const;
};

Curv4 lower_last(const Ten13& r, const Mat& metric, MetricTag tag);
Ten13 raise_last(const Curv4& s, const Mat& metric_inverse);

/// Max residual of the algebraic curvature symmetries: antisymmetry in (1,2)
/// and (3,4), pair symmetry, and the first Bianchi identity.
double curvature_symmetry_residual(const Curv4& s);

/// Christoffel symbols of the second kind from metric jets (order >= 1).
/// Returned as matrices per direction a with Gamma[a](c, b) = Gamma^c_{ab}.
std::vector<Mat> christoffel(const JMat& metric);
std::vector<JMat> christoffel_jets(const JMat& metric);

/// Coordinate Riemann tensor from metric jets (order >= 2), sign convention
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z; the round
/// unit 2-sphere has scalar curvature +2.
Ten13 riemann(const JMat& metric);
Curv4 riemann_lowered(const JMat& metric, MetricTag tag);

/// Ricci tensor Ric(y,z) = trace(v -> R(v,y)z) and scalar curvature.
std::pair<Mat, double> ricci_scalar(const Ten13& r, const Mat& metric);

/// A metric field available as jets of order >= 2 at any queried point.
struct MetricField {
  int n = 0;
  std::function<JMat(const Vec&)> eval;
};

/// Metric field with entries given by DSL expressions (row-major, symmetric).
MetricField metric_field_from_exprs(int n, const std::vector<std::string>& entries, int order = 2);

}  // namespace gim::intrinsic
