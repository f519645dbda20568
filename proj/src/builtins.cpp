#include "gim/errors.hpp"
#include "gim/harness.hpp"

namespace gim::harness {

namespace {

constexpr const char* kBuiltinJson = R"JSON([
{
  "name": "round_sphere_r2",
  "description": "round sphere of radius 2 in R^3 (euclidean, n=2, m=1); umbilic",
  "ambient": {"kind": "euclidean", "k": 0.0, "dim": 3},
  "n": 2,
  "coords": ["2*sin(u1)*cos(u2)", "2*sin(u1)*sin(u2)", "2*cos(u1)"],
  "domain": [[0.0, 3.141592653589793], [0.0, 6.283185307179586]],
  "samples": {"points": [[1.0471975511965976, 0.7853981633974483]]}
},
{
  "name": "sphere_in_s3",
  "description": "small sphere at latitude 0.8 inside the unit 3-sphere (sphere k=1, n=2, m=1)",
  "ambient": {"kind": "sphere", "k": 1.0, "dim": 3},
  "n": 2,
  "coords": ["sin(0.8)*sin(u1)*cos(u2)", "sin(0.8)*sin(u1)*sin(u2)", "sin(0.8)*cos(u1)", "cos(0.8)"],
  "domain": [[0.0, 3.141592653589793], [0.0, 6.283185307179586]]
},
{
  "name": "clifford_torus",
  "description": "minimal Clifford torus in the unit 3-sphere (sphere k=1, n=2, m=1); flat third form",
  "ambient": {"kind": "sphere", "k": 1.0, "dim": 3},
  "n": 2,
  "coords": ["cos(u1)/sqrt(2)", "sin(u1)/sqrt(2)", "cos(u2)/sqrt(2)", "sin(u2)/sqrt(2)"],
  "domain": [[0.0, 6.283185307179586], [0.0, 6.283185307179586]]
},
{
  "name": "torus_of_revolution",
  "description": "torus of revolution with radii 2 and 1 in R^3 (euclidean, n=2, m=1)",
  "ambient": {"kind": "euclidean", "k": 0.0, "dim": 3},
  "n": 2,
  "coords": ["(2+cos(u1))*cos(u2)", "(2+cos(u1))*sin(u2)", "sin(u1)"],
  "domain": [[0.0, 6.283185307179586], [0.0, 6.283185307179586]]
},
{
  "name": "product_torus_r4",
  "description": "product of unit circles in R^4 (euclidean, n=2, m=2); flat normal bundle, intrinsically flat",
  "ambient": {"kind": "euclidean", "k": 0.0, "dim": 4},
  "n": 2,
  "coords": ["cos(u1)", "sin(u1)", "cos(u2)", "sin(u2)"],
  "domain": [[0.0, 6.283185307179586], [0.0, 6.283185307179586]]
},
{
  "name": "helix",
  "description": "circular helix in R^3 (euclidean, n=1, m=2); constant curvature curve",
  "ambient": {"kind": "euclidean", "k": 0.0, "dim": 3},
  "n": 1,
  "coords": ["cos(u1)", "sin(u1)", "u1"],
  "domain": [[0.0, 12.566370614359172]]
},
{
  "name": "equidistant_surface_h3",
  "description": "surface at distance 0.6 from a geodesic plane in hyperbolic 3-space (hyperbolic k=-1, n=2, m=1); umbilic",
  "ambient": {"kind": "hyperbolic", "k": -1.0, "dim": 3},
  "n": 2,
  "coords": ["cosh(0.6)*cosh(u1)", "cosh(0.6)*sinh(u1)*cos(u2)", "cosh(0.6)*sinh(u1)*sin(u2)", "sinh(0.6)"],
  "domain": [[0.25, 1.6], [0.0, 6.283185307179586]]
},
{
  "name": "cylinder",
  "description": "circular cylinder in R^3 (euclidean, n=2, m=1); negative fixture: W singular",
  "ambient": {"kind": "euclidean", "k": 0.0, "dim": 3},
  "n": 2,
  "coords": ["cos(u1)", "sin(u1)", "u2"],
  "domain": [[0.0, 6.283185307179586], [-1.0, 1.0]],
  "expect_failure": "W-singular"
},
{
  "name": "complex_curve_r4",
  "description": "holomorphic graph (u, v, u^2-v^2, 2uv) in R^4 (euclidean, n=2, m=2); negative fixture: normal bundle not flat",
  "ambient": {"kind": "euclidean", "k": 0.0, "dim": 4},
  "n": 2,
  "coords": ["u1", "u2", "u1^2-u2^2", "2*u1*u2"],
  "domain": [[0.5, 1.5], [-0.5, 0.5]],
  "samples": {"points": [[1.0, 0.0]]},
  "expect_failure": "normal-not-flat"
},
{
  "name": "degenerate_map",
  "description": "map with vanishing second parameter direction in R^3 (euclidean, n=2); negative fixture: rank deficient",
  "ambient": {"kind": "euclidean", "k": 0.0, "dim": 3},
  "n": 2,
  "coords": ["u1", "u1^2", "1"],
  "domain": [[-1.0, 1.0], [-1.0, 1.0]],
  "expect_failure": "immersion-degenerate"
}
])JSON";

}  // namespace

const std::vector<Scenario>& builtins() {
  static const std::vector<Scenario> catalog = [] {
    std::vector<Scenario> out;
    json j = json::parse(kBuiltinJson);
    for (const auto& entry : j)
      out.push_back(scenario_from_json(entry, "builtin:" + entry["name"].get<std::string>()));
    return out;
  }();
  return catalog;
}

const Scenario& builtin(const std::string& name) {
  for (const auto& sc : builtins())
    if (sc.name == name) return sc;
  throw UsageError("unknown builtin scenario '" + name + "'");
}

std::vector<std::pair<std::string, std::string>> list_builtins() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& sc : builtins()) out.emplace_back(sc.name, sc.description);
  return out;
}

}  // namespace gim::harness
