#include "gim/spaceform.hpp"

#include <cmath>
#include <sstream>

#include "gim/errors.hpp"

namespace gim {

JMat jmat_identity(int n, const std::shared_ptr<const JetLayout>& layout) {
  JMat out(n, n, layout);
  for (int i = 0; i < n; ++i) out.at(i, i) += 1.0;
  return out;
}

JMat jmat_add(const JMat& a, const JMat& b) {
  JMat out = a;
  for (std::size_t i = 0; i < out.m.size(); ++i) out.m[i] += b.m[i];
  return out;
}

JMat jmat_sub(const JMat& a, const JMat& b) {
  JMat out = a;
  for (std::size_t i = 0; i < out.m.size(); ++i) out.m[i] -= b.m[i];
  return out;
}

JMat jmat_mul(const JMat& a, const JMat& b) {
  JMat out(a.rows, b.cols, a.layout());
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < b.cols; ++c) {
      Jet acc(a.layout());
      for (int t = 0; t < a.cols; ++t) acc += a.at(r, t) * b.at(t, c);
      out.at(r, c) = acc;
    }
  return out;
}

JMat jmat_scale(const JMat& a, const Jet& s) {
  JMat out = a;
  for (auto& j : out.m) j = j * s;
  return out;
}

JMat jmat_scale(const JMat& a, double s) {
  JMat out = a;
  for (auto& j : out.m) j *= s;
  return out;
}

JVec jmat_vec(const JMat& a, const JVec& v) {
  JVec out(a.rows, Jet(a.layout()));
  for (int r = 0; r < a.rows; ++r) {
    Jet acc(a.layout());
    for (int c = 0; c < a.cols; ++c) acc += a.at(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

Jet jmat_trace(const JMat& a) {
  Jet acc(a.layout());
  for (int i = 0; i < a.rows; ++i) acc += a.at(i, i);
  return acc;
}

JMat jmat_inverse(const JMat& a) {
  const int n = a.rows;
  JMat work = a;
  JMat result = jmat_identity(n, a.layout());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(work.at(r, col).value()) > std::abs(work.at(pivot, col).value())) pivot = r;
    if (std::abs(work.at(pivot, col).value()) < 1e-300)
      throw Error("singular matrix in jet inverse");
    if (pivot != col)
      for (int c = 0; c < n; ++c) {
        std::swap(work.at(pivot, c), work.at(col, c));
        std::swap(result.at(pivot, c), result.at(col, c));
      }
    Jet scale = inv(work.at(col, col));
    for (int c = 0; c < n; ++c) {
      work.at(col, c) = work.at(col, c) * scale;
      result.at(col, c) = result.at(col, c) * scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      Jet f = work.at(r, col);
      if (f.value() == 0.0) {
        bool zero = true;
        for (double c : f.coeffs()) zero = zero && c == 0.0;
        if (zero) continue;
      }
      for (int c = 0; c < n; ++c) {
        work.at(r, c) -= f * work.at(col, c);
        result.at(r, c) -= f * result.at(col, c);
      }
    }
  }
  return result;
}

JVec jvec_add(const JVec& a, const JVec& b) {
  JVec out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

JVec jvec_sub(const JVec& a, const JVec& b) {
  JVec out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

JVec jvec_scale(const JVec& a, const Jet& s) {
  JVec out = a;
  for (auto& j : out) j = j * s;
  return out;
}

JVec jvec_scale(const JVec& a, double s) {
  JVec out = a;
  for (auto& j : out) j *= s;
  return out;
}

JVec jvec_truncated(const JVec& a, int order) {
  JVec out = a;
  for (auto& j : out) j = j.truncated(order);
  return out;
}

Vec jvec_values(const JVec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].value();
  return out;
}

}  // namespace gim

namespace gim::spaceform {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::euclidean: return "euclidean";
    case Kind::sphere: return "sphere";
    case Kind::hyperbolic: return "hyperbolic";
  }
  return "?";
}

AmbientModel AmbientModel::euclidean(int dim) { return {Kind::euclidean, 0.0, dim}; }

AmbientModel AmbientModel::sphere(double k, int dim) {
  if (k <= 0) throw ValidationError("sphere requires k > 0", "ambient.k");
  return {Kind::sphere, k, dim};
}

AmbientModel AmbientModel::hyperbolic(double k, int dim) {
  if (k >= 0) throw ValidationError("hyperbolic space requires k < 0", "ambient.k");
  return {Kind::hyperbolic, k, dim};
}

AmbientModel AmbientModel::make(Kind kind, double k, int dim) {
  switch (kind) {
    case Kind::euclidean:
      if (k != 0.0) throw ValidationError("euclidean ambient requires k = 0", "ambient.k");
      return euclidean(dim);
    case Kind::sphere: return sphere(k, dim);
    case Kind::hyperbolic: return hyperbolic(k, dim);
  }
  throw ValidationError("unknown ambient kind", "ambient.kind");
}

double ambient_inner(const AmbientModel& model, const Vec& v, const Vec& w) {
  if (v.size() != model.chart_dim() || w.size() != model.chart_dim())
    throw Error("ambient_inner: dimension mismatch");
  double acc = 0.0;
  for (int a = 0; a < v.size(); ++a) acc += model.signature(a) * v[a] * w[a];
  return acc;
}

Jet ambient_inner(const AmbientModel& model, const JVec& v, const JVec& w) {
  if (static_cast<int>(v.size()) != model.chart_dim() ||
      static_cast<int>(w.size()) != model.chart_dim())
    throw Error("ambient_inner: dimension mismatch");
  Jet acc(v[0].layout());
  for (std::size_t a = 0; a < v.size(); ++a)
    acc += model.signature(static_cast<int>(a)) * (v[a] * w[a]);
  return acc;
}

double constraint_residual(const AmbientModel& model, const Vec& x) {
  if (!model.quadric()) return 0.0;
  return std::abs(ambient_inner(model, x, x) - 1.0 / model.k);
}

Vec tangent_project(const AmbientModel& model, const Vec& x, const Vec& v) {
  if (!model.quadric()) return v;
  double residual = constraint_residual(model, x);
  if (residual > kOnModelTol) {
    std::ostringstream os;
    os << "point is off the " << kind_name(model.kind) << " model (residual " << residual << ")";
    throw ModelError(residual, os.str());
  }
  return v - (ambient_inner(model, v, x) / ambient_inner(model, x, x)) * x;
}

JVec tangent_project(const AmbientModel& model, const JVec& x, const JVec& v) {
  if (!model.quadric()) return v;
  Jet coef = ambient_inner(model, v, x) / ambient_inner(model, x, x);
  JVec out = v;
  for (std::size_t a = 0; a < out.size(); ++a) out[a] -= coef * x[a];
  return out;
}

Vec spaceform_curvature(const AmbientModel& model, const Mat& inner, const Vec& X, const Vec& Y,
                        const Vec& Z) {
  double yz = Y.dot(inner * Z);
  double xz = X.dot(inner * Z);
  return model.k * (yz * X - xz * Y);
}

}  // namespace gim::spaceform
