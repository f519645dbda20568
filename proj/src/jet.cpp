#include "gim/jet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <unordered_map>

namespace gim {

namespace {

uint64_t pack_exponents(std::span<const int> e) {
  uint64_t key = 0;
  for (int v : e) key = (key << 8) | static_cast<uint64_t>(v & 0xff);
  return key;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

JetLayout::JetLayout(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1 || nvars > 8 || order < 0 || order > 8)
    throw Error("jet layout out of supported range");

  // Graded enumeration: all multi-indices of total degree d, d = 0..order.
  std::vector<int> cur(nvars, 0);
  for (int d = 0; d <= order; ++d) {
    // lexicographic enumeration of compositions of d into nvars parts
    std::fill(cur.begin(), cur.end(), 0);
    cur[nvars - 1] = d;
    while (true) {
      exps_.push_back(cur);
      degree_.push_back(d);
      // next composition: find rightmost position (except last) we can bump
      int i = nvars - 2;
      while (i >= 0) {
        int tail = 0;
        for (int t = i + 1; t < nvars; ++t) tail += cur[t];
        if (tail > 0) break;
        --i;
      }
      if (i < 0) break;
      ++cur[i];
      int rest = 0;
      for (int t = i + 1; t < nvars; ++t) {
        rest += cur[t];
        cur[t] = 0;
      }
      cur[nvars - 1] = rest - 1;
    }
  }

  std::unordered_map<uint64_t, int> lookup;
  lookup.reserve(exps_.size());
  for (int i = 0; i < count(); ++i) lookup[pack_exponents(exps_[i])] = i;

  shift_.assign(count() * nvars_, -1);
  std::vector<int> tmp(nvars_);
  for (int i = 0; i < count(); ++i) {
    for (int v = 0; v < nvars_; ++v) {
      if (degree_[i] + 1 > order_) continue;
      tmp = exps_[i];
      ++tmp[v];
      auto it = lookup.find(pack_exponents(tmp));
      if (it != lookup.end()) shift_[i * nvars_ + v] = it->second;
    }
  }

  for (int i = 0; i < count(); ++i) {
    for (int j = 0; j < count(); ++j) {
      if (degree_[i] + degree_[j] > order_) continue;
      double coeff = 1.0;
      for (int v = 0; v < nvars_; ++v) {
        tmp[v] = exps_[i][v] + exps_[j][v];
        coeff *= binomial(tmp[v], exps_[j][v]);
      }
      terms_.push_back({i, j, lookup.at(pack_exponents(tmp)), coeff});
    }
  }
}

int JetLayout::find(std::span<const int> exponents) const {
  for (int i = 0; i < count(); ++i) {
    if (std::equal(exponents.begin(), exponents.end(), exps_[i].begin())) return i;
  }
  return -1;
}

std::shared_ptr<const JetLayout> JetLayout::get(int nvars, int order) {
  // hot path: derivative() and truncated() fetch layouts constantly from
  // worker threads, so the cache must be lock-free after first construction
  constexpr int kMaxVars = 9, kMaxOrder = 9;
  static std::shared_ptr<const JetLayout> slots[kMaxVars][kMaxOrder];
  static std::once_flag flags[kMaxVars][kMaxOrder];
  if (nvars < 1 || nvars >= kMaxVars || order < 0 || order >= kMaxOrder)
    throw Error("jet layout out of supported range");
  std::call_once(flags[nvars][order], [&] {
    slots[nvars][order] = std::shared_ptr<const JetLayout>(new JetLayout(nvars, order));
  });
  return slots[nvars][order];
}

Jet::Jet(std::shared_ptr<const JetLayout> layout, double value)
    : layout_(std::move(layout)), c_(layout_->count(), 0.0) {
  c_[0] = value;
}

Jet Jet::constant(const std::shared_ptr<const JetLayout>& layout, double value) {
  return Jet(layout, value);
}

Jet Jet::variable(const std::shared_ptr<const JetLayout>& layout, int var, double value) {
  Jet j(layout, value);
  if (layout->order() >= 1) {
    std::vector<int> e(layout->nvars(), 0);
    e[var] = 1;
    j.c_[layout->find(e)] = 1.0;
  }
  return j;
}

double Jet::deriv(std::initializer_list<int> vars) const {
  std::vector<int> e(nvars(), 0);
  for (int v : vars) ++e[v];
  int idx = layout_->find(e);
  if (idx < 0) throw Error("jet derivative beyond stored order");
  return c_[idx];
}

Jet Jet::derivative(int var) const {
  if (order() < 1) throw Error("cannot differentiate an order-0 jet");
  auto lower = JetLayout::get(nvars(), order() - 1);
  Jet out(lower);
  for (int i = 0; i < lower->count(); ++i) {
    auto e = lower->exponents(i);
    std::vector<int> shifted(e.begin(), e.end());
    ++shifted[var];
    out.c_[i] = c_[layout_->find(shifted)];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (order > this->order()) throw Error("cannot truncate jet to a higher order");
  if (order == this->order()) return *this;
  auto lower = JetLayout::get(nvars(), order);
  Jet out(lower);
  // graded layouts share a common prefix
  for (int i = 0; i < lower->count(); ++i) out.c_[i] = c_[i];
  return out;
}

void Jet::check_same(const Jet& o) const {
  if (!layout_ || !o.layout_) throw Error("operation on an empty jet");
  if (layout_->nvars() != o.layout_->nvars() || layout_->order() != o.layout_->order())
    throw Error("jet arithmetic requires matching variable count and order");
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& v : out.c_) v = -v;
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Jet& Jet::operator/=(double s) {
  for (auto& v : c_) v /= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.check_same(b);
  Jet out(a.layout_);
  for (const auto& t : a.layout_->product_terms())
    out.c_[t.target] += t.coeff * a.c_[t.lhs] * b.c_[t.rhs];
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * inv(b); }

Jet operator/(double s, const Jet& b) { return inv(b) * s; }

Jet compose(const Jet& f, std::span<const double> phi_derivs) {
  const int K = f.order();
  if (static_cast<int>(phi_derivs.size()) < K + 1)
    throw Error("compose needs order+1 derivative values");
  // Horner over the zero-constant part of f; factorials enter here only.
  Jet shifted = f;
  shifted[0] = 0.0;
  double fact = 1.0;
  for (int k = 2; k <= K; ++k) fact *= k;
  Jet acc = Jet::constant(f.layout(), phi_derivs[K] / fact);
  for (int k = K - 1; k >= 0; --k) {
    fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    acc = acc * shifted + phi_derivs[k] / fact;
  }
  return acc;
}

Jet sin(const Jet& f) {
  double s = std::sin(f.value()), c = std::cos(f.value());
  double d[5] = {s, c, -s, -c, s};
  return compose(f, {d, static_cast<std::size_t>(f.order()) + 1});
}

Jet cos(const Jet& f) {
  double s = std::sin(f.value()), c = std::cos(f.value());
  double d[5] = {c, -s, -c, s, c};
  return compose(f, {d, static_cast<std::size_t>(f.order()) + 1});
}

Jet tan(const Jet& f) {
  if (std::cos(f.value()) == 0.0) throw Error("tan at a pole");
  return sin(f) / cos(f);
}

Jet sinh(const Jet& f) {
  double s = std::sinh(f.value()), c = std::cosh(f.value());
  double d[5] = {s, c, s, c, s};
  return compose(f, {d, static_cast<std::size_t>(f.order()) + 1});
}

Jet cosh(const Jet& f) {
  double s = std::sinh(f.value()), c = std::cosh(f.value());
  double d[5] = {c, s, c, s, c};
  return compose(f, {d, static_cast<std::size_t>(f.order()) + 1});
}

Jet tanh(const Jet& f) { return sinh(f) / cosh(f); }

Jet exp(const Jet& f) {
  double e = std::exp(f.value());
  double d[5] = {e, e, e, e, e};
  return compose(f, {d, static_cast<std::size_t>(f.order()) + 1});
}

Jet log(const Jet& f) {
  double t = f.value();
  if (t <= 0.0) throw Error("log of nonpositive value");
  double d[5] = {std::log(t), 1 / t, -1 / (t * t), 2 / (t * t * t), -6 / (t * t * t * t)};
  return compose(f, {d, static_cast<std::size_t>(f.order()) + 1});
}

Jet sqrt(const Jet& f) {
  double t = f.value();
  if (t <= 0.0) throw Error("sqrt of nonpositive value");
  double r = std::sqrt(t);
  double d[5] = {r, 0.5 * r / t, -0.25 * r / (t * t), 0.375 * r / (t * t * t),
                 -0.9375 * r / (t * t * t * t)};
  return compose(f, {d, static_cast<std::size_t>(f.order()) + 1});
}

Jet atan(const Jet& f) {
  double t = f.value();
  double q = 1 + t * t;
  double d[5] = {std::atan(t), 1 / q, -2 * t / (q * q), (6 * t * t - 2) / (q * q * q),
                 (24 * t - 24 * t * t * t) / (q * q * q * q)};
  return compose(f, {d, static_cast<std::size_t>(f.order()) + 1});
}

Jet inv(const Jet& f) {
  double t = f.value();
  if (t == 0.0) throw Error("division by zero");
  double t2 = t * t;
  double d[5] = {1 / t, -1 / t2, 2 / (t2 * t), -6 / (t2 * t2), 24 / (t2 * t2 * t)};
  return compose(f, {d, static_cast<std::size_t>(f.order()) + 1});
}

Jet pow(const Jet& f, int e) {
  if (e == 0) return Jet::constant(f.layout(), 1.0);
  if (e < 0) {
    if (f.value() == 0.0) throw Error("negative power of zero");
    return inv(pow(f, -e));
  }
  // binary exponentiation keeps integer powers exact
  Jet base = f;
  Jet acc = Jet::constant(f.layout(), 1.0);
  bool started = false;
  int k = e;
  while (k > 0) {
    if (k & 1) {
      acc = started ? acc * base : base;
      started = true;
    }
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return acc;
}

Jet pow(const Jet& f, double e) {
  double r = std::round(e);
  if (std::abs(e - r) < 1e-12 && std::abs(r) < 64) return pow(f, static_cast<int>(r));
  if (f.value() <= 0.0) throw Error("real power of nonpositive base");
  return exp(log(f) * e);
}

}  // namespace gim
