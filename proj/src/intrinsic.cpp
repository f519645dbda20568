#include "gim/intrinsic.hpp"

#include <cmath>

#include "gim/errors.hpp"
#include "gim/expr.hpp"

namespace gim::intrinsic {

double Ten13::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double Curv4::max_abs() const {
  double m = 0.0;
  for (double x : s) m = std::max(m, std::abs(x));
  return m;
}

Curv4 lower_last(const Ten13& r, const Mat& metric, MetricTag tag) {
  Curv4 out(r.n, tag);
  for (int x = 0; x < r.n; ++x)
    for (int y = 0; y < r.n; ++y)
      for (int z = 0; z < r.n; ++z)
        for (int v = 0; v < r.n; ++v) {
          double acc = 0.0;
          for (int d = 0; d < r.n; ++d) acc += metric(v, d) * r.at(x, y, z, d);
          out.at(x, y, z, v) = acc;
        }
  return out;
}

Ten13 raise_last(const Curv4& s, const Mat& metric_inverse) {
  Ten13 out(s.n);
  for (int x = 0; x < s.n; ++x)
    for (int y = 0; y < s.n; ++y)
      for (int z = 0; z < s.n; ++z)
        for (int d = 0; d < s.n; ++d) {
          double acc = 0.0;
          for (int v = 0; v < s.n; ++v) acc += metric_inverse(d, v) * s.at(x, y, z, v);
          out.at(x, y, z, d) = acc;
        }
  return out;
}

double curvature_symmetry_residual(const Curv4& s) {
  double r = 0.0;
  for (int x = 0; x < s.n; ++x)
    for (int y = 0; y < s.n; ++y)
      for (int z = 0; z < s.n; ++z)
        for (int v = 0; v < s.n; ++v) {
          r = std::max(r, std::abs(s.at(x, y, z, v) + s.at(y, x, z, v)));
          r = std::max(r, std::abs(s.at(x, y, z, v) + s.at(x, y, v, z)));
          r = std::max(r, std::abs(s.at(x, y, z, v) - s.at(z, v, x, y)));
          r = std::max(r, std::abs(s.at(x, y, z, v) + s.at(y, z, x, v) + s.at(z, x, y, v)));
        }
  return r;
}

std::vector<JMat> christoffel_jets(const JMat& metric) {
  const int n = metric.rows;
  if (metric.order() < 1) throw Error("christoffel needs metric jets of order >= 1");
  const int out_order = metric.order() - 1;
  JMat ginv = jmat_inverse(metric.truncated(out_order));
  auto layout = ginv.layout();

  // dg[d](a,b) = d_d g_{ab}
  std::vector<JMat> dg(n, JMat(n, n, layout));
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dg[d].at(a, b) = metric.at(a, b).derivative(d);

  std::vector<JMat> gamma(n, JMat(n, n, layout));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Jet acc(layout);
        for (int d = 0; d < n; ++d)
          acc += ginv.at(c, d) * (dg[a].at(d, b) + dg[b].at(d, a) - dg[d].at(a, b));
        gamma[a].at(c, b) = acc * 0.5;
      }
  return gamma;
}

std::vector<Mat> christoffel(const JMat& metric) {
  auto jets = christoffel_jets(metric);
  std::vector<Mat> out;
  out.reserve(jets.size());
  for (const auto& jm : jets) out.push_back(jm.values());
  return out;
}

Ten13 riemann(const JMat& metric) {
  const int n = metric.rows;
  if (metric.order() < 2) throw Error("riemann needs metric jets of order >= 2");
  auto gamma = christoffel_jets(metric);  // order >= 1 jets

  Ten13 r(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int d = 0; d < n; ++d) {
          double acc = gamma[y].at(d, z).deriv({x}) - gamma[x].at(d, z).deriv({y});
          for (int e = 0; e < n; ++e)
            acc += gamma[x].at(d, e).value() * gamma[y].at(e, z).value() -
                   gamma[y].at(d, e).value() * gamma[x].at(e, z).value();
          r.at(x, y, z, d) = acc;
        }
  return r;
}

Curv4 riemann_lowered(const JMat& metric, MetricTag tag) {
  return lower_last(riemann(metric), metric.values(), tag);
}

std::pair<Mat, double> ricci_scalar(const Ten13& r, const Mat& metric) {
  const int n = r.n;
  Mat ric = Mat::Zero(n, n);
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) {
      double acc = 0.0;
      for (int x = 0; x < n; ++x) acc += r.at(x, y, z, x);
      ric(y, z) = acc;
    }
  Mat ginv = metric.inverse();
  double scalar = (ginv * ric).trace();
  return {ric, scalar};
}

MetricField metric_field_from_exprs(int n, const std::vector<std::string>& entries, int order) {
  if (static_cast<int>(entries.size()) != n * n)
    throw ValidationError("metric field needs n*n entries (row-major)", "entries");
  auto parsed = std::make_shared<std::vector<expr::ExprAst>>();
  parsed->reserve(entries.size());
  for (const auto& e : entries) {
    parsed->push_back(expr::parse(e));
    expr::validate(parsed->back(), n);
  }
  MetricField field;
  field.n = n;
  field.eval = [n, order, parsed](const Vec& u) {
    std::vector<double> base(u.data(), u.data() + u.size());
    JMat g(n, n, JetLayout::get(n, order));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) g.at(a, b) = expr::eval_jet((*parsed)[a * n + b], base, order);
    return g;
  };
  return field;
}

}  // namespace gim::intrinsic
