#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gim/spaceform.hpp"

using namespace gim;
using namespace gim::spaceform;

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

Vec vec4(double a, double b, double c, double d) {
  Vec v(4);
  v << a, b, c, d;
  return v;
}

}  // namespace

TEST_CASE("signature-weighted inner products") {
  auto e3 = AmbientModel::euclidean(3);
  CHECK(ambient_inner(e3, vec3(1, 0, 0), vec3(0, 1, 0)) == doctest::Approx(0));
  auto e2 = AmbientModel::euclidean(2);
  Vec a(2), b(2);
  a << 1, 2;
  b << 3, 4;
  CHECK(ambient_inner(e2, a, b) == doctest::Approx(11));
  auto h2 = AmbientModel::hyperbolic(-1, 2);  // chart dimension 3
  CHECK(ambient_inner(h2, vec3(1, 1, 0), vec3(1, 1, 0)) == doctest::Approx(0));
  CHECK_THROWS_AS(ambient_inner(e3, a, b), Error);
}

TEST_CASE("constraint residuals") {
  auto s3 = AmbientModel::sphere(1, 3);
  CHECK(constraint_residual(s3, vec4(1, 0, 0, 0)) == doctest::Approx(0));
  CHECK(constraint_residual(s3, vec4(1, 1, 0, 0)) == doctest::Approx(1));
  auto h3 = AmbientModel::hyperbolic(-1, 3);
  CHECK(constraint_residual(h3, vec4(1, 0, 0, 0)) == doctest::Approx(0));
  auto e3 = AmbientModel::euclidean(3);
  CHECK(constraint_residual(e3, vec3(5, 5, 5)) == 0.0);
}

TEST_CASE("tangent projection removes the radial component") {
  auto e3 = AmbientModel::euclidean(3);
  Vec v = vec3(1, 2, 3);
  CHECK((tangent_project(e3, vec3(0, 0, 0), v) - v).norm() == doctest::Approx(0));

  auto s2 = AmbientModel::sphere(1, 2);
  Vec p = tangent_project(s2, vec3(1, 0, 0), vec3(1, 1, 0));
  CHECK((p - vec3(0, 1, 0)).norm() == doctest::Approx(0).epsilon(1e-12));
  Vec q = tangent_project(s2, vec3(0, 1, 0), vec3(0, 3, 0));
  CHECK(q.norm() == doctest::Approx(0).epsilon(1e-12));

  CHECK_THROWS_AS(tangent_project(s2, vec3(1, 1, 0), vec3(1, 0, 0)), ModelError);
}

TEST_CASE("tangent projection is idempotent and orthogonal to x") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto s2 = AmbientModel::sphere(2.0, 2);  // radius 1/sqrt(2)
  auto h2 = AmbientModel::hyperbolic(-1.5, 2);
  for (int c = 0; c < 200; ++c) {
    double theta = dist(rng) * 3, phi = dist(rng) * 3;
    double r = 1 / std::sqrt(2.0);
    Vec xs = vec3(r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
                  r * std::cos(theta));
    Vec v = vec3(dist(rng), dist(rng), dist(rng));
    Vec p1 = tangent_project(s2, xs, v);
    Vec p2 = tangent_project(s2, xs, p1);
    CHECK((p1 - p2).lpNorm<Eigen::Infinity>() <= 1e-13);
    CHECK(std::abs(ambient_inner(s2, p1, xs)) <= 1e-12);

    // hyperboloid <x,x> = 1/k = -2/3: x = s*(cosh t, sinh t cos a, sinh t sin a)
    double s = std::sqrt(2.0 / 3.0), t = dist(rng), a = dist(rng) * 3;
    Vec xh = vec3(s * std::cosh(t), s * std::sinh(t) * std::cos(a), s * std::sinh(t) * std::sin(a));
    Vec ph = tangent_project(h2, xh, v);
    Vec ph2 = tangent_project(h2, xh, ph);
    CHECK((ph - ph2).lpNorm<Eigen::Infinity>() <= 1e-13);
    CHECK(std::abs(ambient_inner(h2, ph, xh)) <= 1e-12);
    // nonzero tangents at hyperboloid points are spacelike
    if (ph.norm() > 1e-8) CHECK(ambient_inner(h2, ph, ph) > 0.0);
  }
}

TEST_CASE("constant-curvature tensor") {
  Mat id = Mat::Identity(2, 2);
  Vec X(2), Y(2);
  X << 1, 0;
  Y << 0, 1;
  auto flat = AmbientModel::euclidean(4);
  CHECK(spaceform_curvature(flat, id, X, Y, Y).norm() == doctest::Approx(0));
  auto s = AmbientModel::sphere(1, 3);
  CHECK((spaceform_curvature(s, id, X, Y, Y) - X).norm() == doctest::Approx(0));
  CHECK(spaceform_curvature(s, id, X, X, Y).norm() == doctest::Approx(0));  // antisymmetry

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int c = 0; c < 100; ++c) {
    Vec A(2), B(2), Z(2);
    A << dist(rng), dist(rng);
    B << dist(rng), dist(rng);
    Z << dist(rng), dist(rng);
    Vec lhs = spaceform_curvature(s, id, A, B, Z);
    Vec rhs = spaceform_curvature(s, id, B, A, Z);
    CHECK((lhs + rhs).lpNorm<Eigen::Infinity>() == doctest::Approx(0));
  }
}

TEST_CASE("jet-level projection and inner products agree with values") {
  auto s2 = AmbientModel::sphere(1.0, 2);
  auto layout = JetLayout::get(2, 3);
  // x(u) = (sin u1 cos u2, sin u1 sin u2, cos u1) on the unit sphere
  Jet u1 = Jet::variable(layout, 0, 0.9);
  Jet u2 = Jet::variable(layout, 1, 0.4);
  JVec x = {sin(u1) * cos(u2), sin(u1) * sin(u2), cos(u1)};
  JVec v = {Jet::constant(layout, 1.0), Jet::constant(layout, 0.5), Jet::constant(layout, -0.2)};
  JVec p = tangent_project(s2, x, v);
  CHECK(std::abs(ambient_inner(s2, p, x).value()) <= 1e-14);
  // the projected field stays tangent as a jet identity
  Jet ip = ambient_inner(s2, p, x);
  for (double c : ip.coeffs()) CHECK(std::abs(c) <= 1e-13);

  Vec x0 = jvec_values(x), v0 = jvec_values(v);
  CHECK((jvec_values(p) - tangent_project(s2, x0, v0)).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("jet matrix inverse") {
  auto layout = JetLayout::get(2, 2);
  JMat a(2, 2, layout);
  a.at(0, 0) = Jet::variable(layout, 0, 2.0);
  a.at(0, 1) = Jet::constant(layout, 0.5);
  a.at(1, 0) = sin(Jet::variable(layout, 1, 0.3));
  a.at(1, 1) = Jet::variable(layout, 1, 1.5);
  JMat inv_a = jmat_inverse(a);
  JMat prod = jmat_mul(a, inv_a);
  JMat id = jmat_identity(2, layout);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      auto got = prod.at(r, c).coeffs();
      auto want = id.at(r, c).coeffs();
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-13);
    }
}
