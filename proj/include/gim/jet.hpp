#pragma once

#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

#include "gim/errors.hpp"

namespace gim {

/// Enumeration of the multi-indices |alpha| <= order in `nvars` variables,
/// in graded lexicographic order, together with the Leibniz pairing table
/// used by jet multiplication. Layouts are cached and shared; index 0 is
/// always the zero multi-index (the value slot).
class JetLayout {
 public:
  static std::shared_ptr<const JetLayout> get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int count() const { return static_cast<int>(exps_.size()); }

  int degree(int idx) const { return degree_[idx]; }
  std::span<const int> exponents(int idx) const {
    return {exps_[idx].data(), static_cast<std::size_t>(nvars_)};
  }

  /// Index of alpha + e_var, or -1 when that exceeds the layout order.
  int shift(int idx, int var) const { return shift_[idx * nvars_ + var]; }

  /// Index of a multi-index given its exponents, or -1 if absent.
  int find(std::span<const int> exponents) const;

  struct ProductTerm {
    int lhs, rhs, target;
    double coeff;  // product of per-variable binomials C(a+b, b)
  };
  std::span<const ProductTerm> product_terms() const { return terms_; }

 private:
  JetLayout(int nvars, int order);
  int nvars_, order_;
  std::vector<std::vector<int>> exps_;
  std::vector<int> degree_;
  std::vector<int> shift_;
  std::vector<ProductTerm> terms_;
};

/// Truncated multivariate Taylor jet: the raw partial derivatives
/// d^alpha f(u0) for |alpha| <= order. Coefficients are raw derivatives,
/// not Taylor coefficients; factorials appear only inside the composition
/// kernel. Arithmetic requires both operands to share nvars and order.
class Jet {
 public:
  Jet() = default;  // empty; must be assigned before use

  explicit Jet(std::shared_ptr<const JetLayout> layout, double value = 0.0);

  static Jet constant(const std::shared_ptr<const JetLayout>& layout, double value);
  /// The coordinate function u_var (0-based) expanded at base value `value`.
  static Jet variable(const std::shared_ptr<const JetLayout>& layout, int var, double value);

  bool valid() const { return layout_ != nullptr; }
  int nvars() const { return layout_->nvars(); }
  int order() const { return layout_->order(); }
  const std::shared_ptr<const JetLayout>& layout() const { return layout_; }

  double value() const { return c_[0]; }
  double& operator[](int idx) { return c_[idx]; }
  double operator[](int idx) const { return c_[idx]; }
  std::span<const double> coeffs() const { return c_; }

  /// Raw partial derivative for the multi-index given as a list of variable
  /// numbers, e.g. deriv({0,1}) = d^2 f / du0 du1. deriv({}) is the value.
  double deriv(std::initializer_list<int> vars) const;

  /// Jet of the partial derivative with respect to `var`; order drops by one.
  Jet derivative(int var) const;

  /// Copy truncated to a lower (or equal) order.
  Jet truncated(int order) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }

  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(double s, const Jet& b);

 private:
  void check_same(const Jet& o) const;
  std::shared_ptr<const JetLayout> layout_;
  std::vector<double> c_;
};

/// Composition h = phi(f) from the derivatives phi^(k)(f.value()), k = 0..order.
Jet compose(const Jet& f, std::span<const double> phi_derivs);

Jet sin(const Jet& f);
Jet cos(const Jet& f);
Jet tan(const Jet& f);
Jet sinh(const Jet& f);
Jet cosh(const Jet& f);
Jet tanh(const Jet& f);
Jet exp(const Jet& f);
Jet log(const Jet& f);
Jet sqrt(const Jet& f);
Jet atan(const Jet& f);
Jet inv(const Jet& f);

Jet pow(const Jet& f, int e);
Jet pow(const Jet& f, double e);

}  // namespace gim
