#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gim/jet.hpp"

namespace gim {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Vector and square-matrix helpers over the jet ring. Sizes here are tiny
/// (chart dimension at most 5), so everything is dense and allocation-relaxed.
using JVec = std::vector<Jet>;

struct JMat {
  int rows = 0, cols = 0;
  std::vector<Jet> m;

  JMat() = default;
  JMat(int r, int c, const std::shared_ptr<const JetLayout>& layout)
      : rows(r), cols(c), m(static_cast<std::size_t>(r) * c, Jet(layout)) {}

  Jet& at(int r, int c) { return m[static_cast<std::size_t>(r) * cols + c]; }
  const Jet& at(int r, int c) const { return m[static_cast<std::size_t>(r) * cols + c]; }

  Mat values() const {
    Mat v(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) v(r, c) = at(r, c).value();
    return v;
  }

  JMat truncated(int order) const {
    JMat out = *this;
    for (auto& j : out.m) j = j.truncated(order);
    return out;
  }

  int order() const { return m.empty() ? -1 : m[0].order(); }
  std::shared_ptr<const JetLayout> layout() const {
    return m.empty() ? nullptr : m[0].layout();
  }
};

JMat jmat_identity(int n, const std::shared_ptr<const JetLayout>& layout);
JMat jmat_add(const JMat& a, const JMat& b);
JMat jmat_sub(const JMat& a, const JMat& b);
JMat jmat_mul(const JMat& a, const JMat& b);
JMat jmat_scale(const JMat& a, const Jet& s);
JMat jmat_scale(const JMat& a, double s);
JVec jmat_vec(const JMat& a, const JVec& v);
Jet jmat_trace(const JMat& a);
/// Gauss-Jordan inverse with partial pivoting on coefficient values.
JMat jmat_inverse(const JMat& a);

JVec jvec_add(const JVec& a, const JVec& b);
JVec jvec_sub(const JVec& a, const JVec& b);
JVec jvec_scale(const JVec& a, const Jet& s);
JVec jvec_scale(const JVec& a, double s);
JVec jvec_truncated(const JVec& a, int order);
Vec jvec_values(const JVec& a);

}  // namespace gim
