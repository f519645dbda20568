#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gim/expr.hpp"
#include "gim/spaceform.hpp"

namespace gim::harness {

using json = nlohmann::ordered_json;

/// A verification scenario: an immersion into a space form plus sampling and
/// tolerance policy. Loaded from JSON or taken from the built-in catalog.
struct Scenario {
  std::string name;
  std::string description;
  spaceform::AmbientModel model;
  int n = 0;
  std::vector<std::string> coord_sources;
  std::shared_ptr<const std::vector<expr::ExprAst>> coords;
  std::vector<std::array<double, 2>> domain;
  std::vector<int> grid;          // per-axis sample counts; empty = default 5
  std::vector<Vec> points;        // explicit sample points
  std::map<std::string, double> tolerances;  // per-check overrides
  std::uint64_t seed = 1;
  std::string expect_failure;  // "", "normal-not-flat", "W-singular", "immersion-degenerate"

  std::vector<Vec> sample_points() const;
};

Scenario scenario_from_json(const json& j, const std::string& origin);
Scenario load_scenario(const std::string& path);

/// Built-in catalog. Entries parse through the same JSON loader as files.
const std::vector<Scenario>& builtins();
const Scenario& builtin(const std::string& name);
std::vector<std::pair<std::string, std::string>> list_builtins();

/// Resolve an argument as a built-in name or a scenario file path.
Scenario resolve_scenario(const std::string& name_or_path);

enum class CheckKind { residual, lower_bound };

struct CheckDef {
  std::string name;
  CheckKind kind;
  double default_tol;
  std::string description;
};

/// Ordered registry: one entry per check run_checks performs, each mapping
/// to a verified identity or a plumbing validation.
const std::vector<CheckDef>& check_registry();

/// Gate checks make the rest of the pipeline incomputable when they fail.
bool is_gate_check(const std::string& name);

struct CheckResult {
  std::string name;
  CheckKind kind = CheckKind::residual;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string note;
};

struct PointRecord {
  int index = 0;
  Vec u;
  std::vector<CheckResult> checks;
  std::map<std::string, double> quantities;
  bool expected_fired = false;
  bool pass = false;
};

struct CheckReport {
  std::string scenario;
  std::string expect_failure;
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  bool pass = false;
  std::vector<PointRecord> points;
  double elapsed_ms = 0.0;
  int threads = 0;

  json to_json(bool include_runtime = true) const;
};

struct RunOptions {
  double tol_scale = 1.0;
  int threads = 1;  // 1 = serial reference path; 0 = OpenMP default team
  std::optional<std::uint64_t> seed;
};

/// Evaluate one sample point: every check in registry order, stopping after
/// a failed gate. Never throws; failures become check results.
PointRecord evaluate_point(const Scenario& sc, const Vec& u, int index, double tol_scale,
                           bool stop_on_identity_failure = true);

CheckReport run_checks(const Scenario& sc, const RunOptions& opts = {});

/// Quantities a sweep can emit (scalar_III, scalar_I, w_min, cluster_gap,
/// or any residual check name).
std::vector<std::string> sweep_quantities();

struct SweepOptions {
  std::vector<int> grid;
  std::vector<std::string> quantities;
  double tol_scale = 1.0;
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

std::string sweep_csv(const Scenario& sc, const SweepOptions& opts);

int cli_main(int argc, const char* const* argv);

}  // namespace gim::harness
