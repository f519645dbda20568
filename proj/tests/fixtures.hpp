#pragma once

// Classical immersions used as test fixtures across the suites.

#include <string>
#include <vector>

#include "gim/gaussmap.hpp"
#include "gim/immersion.hpp"

namespace fixtures {

using gim::Vec;
using gim::immersion::GeometryJet;
using gim::spaceform::AmbientModel;

struct Case {
  std::string name;
  AmbientModel model;
  std::vector<std::string> coords;
  int n;
};

inline Case round_sphere_r2() {
  return {"round_sphere_r2", AmbientModel::euclidean(3),
          {"2*sin(u1)*cos(u2)", "2*sin(u1)*sin(u2)", "2*cos(u1)"}, 2};
}

inline Case plane() {
  return {"plane", AmbientModel::euclidean(3), {"u1", "u2", "0"}, 2};
}

inline Case helix() {
  return {"helix", AmbientModel::euclidean(3), {"cos(u1)", "sin(u1)", "u1"}, 1};
}

inline Case cylinder() {
  return {"cylinder", AmbientModel::euclidean(3), {"cos(u1)", "sin(u1)", "u2"}, 2};
}

inline Case torus_of_revolution() {
  return {"torus_of_revolution", AmbientModel::euclidean(3),
          {"(2+cos(u1))*cos(u2)", "(2+cos(u1))*sin(u2)", "sin(u1)"}, 2};
}

inline Case product_torus_r4() {
  return {"product_torus_r4", AmbientModel::euclidean(4),
          {"cos(u1)", "sin(u1)", "cos(u2)", "sin(u2)"}, 2};
}

inline Case complex_curve_r4() {
  return {"complex_curve_r4", AmbientModel::euclidean(4),
          {"u1", "u2", "u1^2-u2^2", "2*u1*u2"}, 2};
}

inline Case clifford_torus() {
  return {"clifford_torus", AmbientModel::sphere(1.0, 3),
          {"cos(u1)/sqrt(2)", "sin(u1)/sqrt(2)", "cos(u2)/sqrt(2)", "sin(u2)/sqrt(2)"}, 2};
}

inline Case sphere_in_s3() {
  return {"sphere_in_s3", AmbientModel::sphere(1.0, 3),
          {"sin(0.8)*sin(u1)*cos(u2)", "sin(0.8)*sin(u1)*sin(u2)", "sin(0.8)*cos(u1)",
           "cos(0.8)"}, 2};
}

inline Case equidistant_surface_h3() {
  return {"equidistant_surface_h3", AmbientModel::hyperbolic(-1.0, 3),
          {"cosh(0.6)*cosh(u1)", "cosh(0.6)*sinh(u1)*cos(u2)", "cosh(0.6)*sinh(u1)*sin(u2)",
           "sinh(0.6)"}, 2};
}

inline GeometryJet geometry(const Case& c, const Vec& u0, int order = 4) {
  std::vector<gim::expr::ExprAst> asts;
  for (const auto& src : c.coords) {
    asts.push_back(gim::expr::parse(src));
    gim::expr::validate(asts.back(), c.n);
  }
  return gim::immersion::evaluate_geometry(asts, c.model, u0, order);
}

inline Vec point2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

inline Vec point1(double a) {
  Vec v(1);
  v << a;
  return v;
}

}  // namespace fixtures
