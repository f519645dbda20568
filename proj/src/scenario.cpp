#include <fstream>
#include <sstream>

#include "gim/errors.hpp"
#include "gim/harness.hpp"

namespace gim::harness {

namespace {

[[noreturn]] void schema_error(const std::string& origin, const std::string& field,
                               const std::string& msg) {
  std::ostringstream os;
  os << origin << ": " << field << ": " << msg;
  throw ValidationError(os.str(), field);
}

double require_number(const json& j, const std::string& origin, const std::string& field) {
  if (!j.is_number()) schema_error(origin, field, "expected a number");
  return j.get<double>();
}

}  // namespace

std::vector<Vec> Scenario::sample_points() const {
  std::vector<Vec> out;
  std::vector<int> counts = grid;
  if (counts.empty()) counts.assign(n, 5);

  // default grid shrinks 5% from each boundary; chart singularities live on
  // scenario boundaries by convention
  std::vector<std::vector<double>> axes(n);
  for (int a = 0; a < n; ++a) {
    double lo = domain[a][0], hi = domain[a][1];
    double span = hi - lo;
    double lo2 = lo + 0.05 * span, hi2 = hi - 0.05 * span;
    int c = counts[a];
    for (int i = 0; i < c; ++i)
      axes[a].push_back(c == 1 ? 0.5 * (lo2 + hi2) : lo2 + (hi2 - lo2) * i / (c - 1));
  }
  std::vector<int> idx(n, 0);
  while (true) {
    Vec u(n);
    for (int a = 0; a < n; ++a) u[a] = axes[a][idx[a]];
    out.push_back(u);
    int a = n - 1;
    while (a >= 0) {
      if (++idx[a] < static_cast<int>(axes[a].size())) break;
      idx[a] = 0;
      --a;
    }
    if (a < 0) break;
  }
  for (const auto& p : points) out.push_back(p);
  return out;
}

Scenario scenario_from_json(const json& j, const std::string& origin) {
  Scenario sc;
  if (!j.is_object()) schema_error(origin, "$", "scenario must be a JSON object");

  if (!j.contains("name") || !j["name"].is_string())
    schema_error(origin, "name", "required string");
  sc.name = j["name"].get<std::string>();
  sc.description = j.value("description", std::string{});

  if (!j.contains("ambient") || !j["ambient"].is_object())
    schema_error(origin, "ambient", "required object {kind, k, dim}");
  const json& amb = j["ambient"];
  std::string kind = amb.value("kind", std::string{});
  double k = amb.contains("k") ? require_number(amb["k"], origin, "ambient.k") : 0.0;
  if (!amb.contains("dim") || !amb["dim"].is_number_integer())
    schema_error(origin, "ambient.dim", "required integer (space form dimension n+m)");
  int dim = amb["dim"].get<int>();

  spaceform::Kind kk;
  if (kind == "euclidean") kk = spaceform::Kind::euclidean;
  else if (kind == "sphere") kk = spaceform::Kind::sphere;
  else if (kind == "hyperbolic") kk = spaceform::Kind::hyperbolic;
  else schema_error(origin, "ambient.kind", "must be euclidean, sphere, or hyperbolic");
  try {
    sc.model = spaceform::AmbientModel::make(kk, k, dim);
  } catch (const ValidationError& e) {
    schema_error(origin, "ambient.k", e.what());
  }

  if (!j.contains("n") || !j["n"].is_number_integer())
    schema_error(origin, "n", "required integer (parameter dimension)");
  sc.n = j["n"].get<int>();
  if (sc.n < 1 || sc.n >= dim)
    schema_error(origin, "n", "needs 1 <= n < ambient.dim");

  if (!j.contains("coords") || !j["coords"].is_array())
    schema_error(origin, "coords", "required array of expression strings");
  if (static_cast<int>(j["coords"].size()) != sc.model.chart_dim()) {
    std::ostringstream os;
    os << "expected " << sc.model.chart_dim() << " expressions for the "
       << spaceform::kind_name(sc.model.kind) << " chart, got " << j["coords"].size();
    schema_error(origin, "coords", os.str());
  }
  auto parsed = std::make_shared<std::vector<expr::ExprAst>>();
  for (std::size_t i = 0; i < j["coords"].size(); ++i) {
    const json& c = j["coords"][i];
    std::string field = "coords[" + std::to_string(i) + "]";
    if (!c.is_string()) schema_error(origin, field, "expected an expression string");
    sc.coord_sources.push_back(c.get<std::string>());
    try {
      parsed->push_back(expr::parse(sc.coord_sources.back()));
      expr::validate(parsed->back(), sc.n);
    } catch (const Error& e) {
      schema_error(origin, field, e.what());
    }
  }
  sc.coords = parsed;

  if (!j.contains("domain") || !j["domain"].is_array() ||
      static_cast<int>(j["domain"].size()) != sc.n)
    schema_error(origin, "domain", "required array of n [lo, hi] pairs");
  for (int a = 0; a < sc.n; ++a) {
    const json& d = j["domain"][a];
    std::string field = "domain[" + std::to_string(a) + "]";
    if (!d.is_array() || d.size() != 2) schema_error(origin, field, "expected [lo, hi]");
    double lo = require_number(d[0], origin, field);
    double hi = require_number(d[1], origin, field);
    if (!(lo < hi)) schema_error(origin, field, "needs lo < hi");
    sc.domain.push_back({lo, hi});
  }

  if (j.contains("samples")) {
    const json& s = j["samples"];
    if (!s.is_object()) schema_error(origin, "samples", "expected object {grid?, points?}");
    if (s.contains("grid")) {
      if (!s["grid"].is_array() || static_cast<int>(s["grid"].size()) != sc.n)
        schema_error(origin, "samples.grid", "expected n per-axis counts");
      for (const auto& g : s["grid"]) {
        int c = g.get<int>();
        if (c < 1) schema_error(origin, "samples.grid", "counts must be >= 1");
        sc.grid.push_back(c);
      }
    }
    if (s.contains("points")) {
      if (!s["points"].is_array()) schema_error(origin, "samples.points", "expected an array");
      for (std::size_t i = 0; i < s["points"].size(); ++i) {
        const json& p = s["points"][i];
        std::string field = "samples.points[" + std::to_string(i) + "]";
        if (!p.is_array() || static_cast<int>(p.size()) != sc.n)
          schema_error(origin, field, "expected n coordinates");
        Vec u(sc.n);
        for (int a = 0; a < sc.n; ++a) u[a] = require_number(p[a], origin, field);
        for (int a = 0; a < sc.n; ++a)
          if (u[a] < sc.domain[a][0] || u[a] > sc.domain[a][1])
            schema_error(origin, field, "point lies outside the declared domain");
        sc.points.push_back(u);
      }
    }
  }

  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object())
      schema_error(origin, "tolerances", "expected {check-name: tolerance}");
    for (const auto& [key, value] : j["tolerances"].items()) {
      bool known = false;
      for (const auto& def : check_registry()) known = known || def.name == key;
      if (!known) schema_error(origin, "tolerances." + key, "unknown check name");
      sc.tolerances[key] = require_number(value, origin, "tolerances." + key);
    }
  }

  if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();

  if (j.contains("expect_failure")) {
    std::string tag = j["expect_failure"].get<std::string>();
    if (tag != "normal-not-flat" && tag != "W-singular" && tag != "immersion-degenerate")
      schema_error(origin, "expect_failure",
                   "must be normal-not-flat, W-singular, or immersion-degenerate");
    sc.expect_failure = tag;
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what(), "$");
  }
  return scenario_from_json(j, path);
}

Scenario resolve_scenario(const std::string& name_or_path) {
  for (const auto& sc : builtins())
    if (sc.name == name_or_path) return sc;
  if (name_or_path.find('.') != std::string::npos || name_or_path.find('/') != std::string::npos)
    return load_scenario(name_or_path);
  throw UsageError("unknown builtin scenario '" + name_or_path +
                   "' (use `list`, or pass a JSON file path)");
}

}  // namespace gim::harness
