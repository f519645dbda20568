#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gim/errors.hpp"
#include "gim/gaussmap.hpp"
#include "gim/harness.hpp"

namespace gim::harness {

namespace {

std::vector<int> parse_grid(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    try {
      out.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw UsageError("bad grid spec '" + spec + "'; expected e.g. 16x16");
    }
  }
  if (out.empty()) throw UsageError("bad grid spec '" + spec + "'");
  return out;
}

std::vector<std::string> split_csv(const std::string& spec) {
  std::vector<std::string> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(part);
  return out;
}

void print_report(const CheckReport& report) {
  std::cout << "scenario " << report.scenario;
  if (!report.expect_failure.empty())
    std::cout << " (negative fixture: " << report.expect_failure << ")";
  std::cout << "\n  points: " << report.points.size() << ", seed " << report.seed << ", threads "
            << report.threads << "\n";
  json summary = report.to_json(false)["summary"];
  for (const auto& [name, entry] : summary.items()) {
    std::cout << "  " << (entry["pass"].get<bool>() ? "pass " : "FAIL ") << name;
    if (entry.contains("max_residual"))
      std::cout << "  max residual " << entry["max_residual"].dump();
    else
      std::cout << "  min value " << entry["min_value"].dump();
    if (entry.contains("skipped"))
      std::cout << "  (skipped at " << entry["skipped"].get<int>() << " points)";
    std::cout << "\n";
  }
  std::cout << (report.pass ? "PASS" : "FAIL") << " " << report.scenario << " ("
            << report.elapsed_ms << " ms)\n";
}

json tensor_json(const Scenario& sc, const Vec& u, const std::string& tensor, bool literal_p) {
  using namespace gim::gaussmap;
  auto geom = immersion::evaluate_geometry(*sc.coords, sc.model, u, 4);
  auto shape = immersion::shape_operators(geom);
  auto ob = obata(shape, geom);

  json out;
  out["scenario"] = sc.name;
  out["point"] = std::vector<double>(u.data(), u.data() + u.size());
  out["tensor"] = tensor;

  auto mat_json = [](const Mat& M) {
    json rows = json::array();
    for (int r = 0; r < M.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
      rows.push_back(row);
    }
    return rows;
  };

  if (tensor == "W") {
    out["components"] = mat_json(ob.W0);
    return out;
  }
  if (tensor == "III") {
    out["components"] = mat_json(ob.III0);
    return out;
  }

  Ten13 r13 = intrinsic::riemann(geom.g);
  auto T = connection_difference(shape, ob);
  auto aux = build_aux_tensors(shape, ob, r13,
                               literal_p ? PReading::literal : PReading::commutator);

  if (tensor == "T") {
    // components[a][b] = coordinates of T(e_a, e_b)
    json ta = json::array();
    for (int a = 0; a < geom.n; ++a) {
      json tb = json::array();
      for (int b = 0; b < geom.n; ++b) {
        json v = json::array();
        for (int c = 0; c < geom.n; ++c) v.push_back(T.T0[a](c, b));
        tb.push_back(v);
      }
      ta.push_back(tb);
    }
    out["components"] = ta;
    return out;
  }
  if (tensor == "P") {
    json pa = json::array();
    for (int a = 0; a < geom.n; ++a) {
      json pb = json::array();
      for (int b = 0; b < geom.n; ++b) {
        json pc = json::array();
        for (int z = 0; z < geom.n; ++z) {
          json v = json::array();
          for (int d = 0; d < geom.n; ++d) v.push_back(aux.P.at(a, b, z, d));
          pc.push_back(v);
        }
        pb.push_back(pc);
      }
      pa.push_back(pb);
    }
    out["components"] = pa;
    return out;
  }

  GaussInputs in{&geom, &shape, &ob, &T, &aux, &r13};
  Curv4 r3 = gauss_image_curvature(Route::theorem, in);
  if (tensor == "R3") {
    json ra = json::array();
    for (int a = 0; a < geom.n; ++a) {
      json rb = json::array();
      for (int b = 0; b < geom.n; ++b) {
        json rc = json::array();
        for (int z = 0; z < geom.n; ++z) {
          json v = json::array();
          for (int d = 0; d < geom.n; ++d) v.push_back(r3.at(a, b, z, d));
          rc.push_back(v);
        }
        rb.push_back(rc);
      }
      ra.push_back(rb);
    }
    out["components"] = ra;
    return out;
  }
  if (tensor == "scalar") {
    Curv4 oracle = intrinsic::riemann_lowered(ob.III, intrinsic::MetricTag::third);
    out["formula"] = gauss_image_scalar_formula(geom, shape, ob, T, aux);
    out["contraction"] = gauss_image_scalar_contraction(r3, ob.III0);
    out["oracle"] = gauss_image_scalar_contraction(oracle, ob.III0);
    return out;
  }
  throw UsageError("unknown tensor '" + tensor + "' (W, III, T, P, R3, scalar)");
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"numerical verification of Gauss-image curvature formulas for normally flat "
               "submanifolds of space forms"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list", "list built-in scenarios");

  std::string scenario_arg, json_path, grid_spec, quantities_spec, out_path, point_spec, tensor;
  double tol_scale = 1.0;
  std::uint64_t seed = 0;
  bool have_seed = false;
  int threads = 1;
  bool literal_p = false;

  auto* check_cmd = app.add_subcommand("check", "run the verification suite on a scenario");
  check_cmd->add_option("scenario", scenario_arg, "builtin name or scenario JSON path")
      ->required();
  check_cmd->add_option("--tol-scale", tol_scale, "multiply every residual tolerance");
  check_cmd->add_option("--seed", seed, "override the scenario seed")
      ->each([&](const std::string&) { have_seed = true; });
  check_cmd->add_option("--json", json_path, "write the full JSON report to this path");
  check_cmd->add_option("--threads", threads,
                        "worker threads (1 = serial reference, 0 = OpenMP default)");

  auto* sweep_cmd = app.add_subcommand("sweep", "tabulate quantities over a parameter grid");
  sweep_cmd->add_option("scenario", scenario_arg, "builtin name or scenario JSON path")
      ->required();
  sweep_cmd->add_option("--grid", grid_spec, "per-axis resolution, e.g. 16x16")->required();
  sweep_cmd->add_option("--quantities", quantities_spec, "comma-separated quantity names")
      ->required();
  sweep_cmd->add_option("--out", out_path, "output CSV path (default stdout)");
  sweep_cmd->add_option("--seed", seed, "override the scenario seed")
      ->each([&](const std::string&) { have_seed = true; });
  sweep_cmd->add_option("--threads", threads, "worker threads");

  auto* eval_cmd = app.add_subcommand("eval", "print one tensor at one parameter point");
  eval_cmd->add_option("scenario", scenario_arg, "builtin name or scenario JSON path")
      ->required();
  eval_cmd->add_option("--point", point_spec, "comma-separated parameter values")->required();
  eval_cmd->add_option("--tensor", tensor, "W | III | T | P | R3 | scalar")->required();
  eval_cmd->add_flag("--p-literal", literal_p,
                     "debug: use the literal-composition reading of the P tensor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list_cmd->parsed()) {
      for (const auto& [name, description] : list_builtins())
        std::cout << name << "\n    " << description << "\n";
      return 0;
    }

    Scenario sc = resolve_scenario(scenario_arg);

    if (check_cmd->parsed()) {
      RunOptions opts;
      opts.tol_scale = tol_scale;
      opts.threads = threads;
      if (have_seed) opts.seed = seed;
      CheckReport report = run_checks(sc, opts);
      if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw UsageError("cannot write report to " + json_path);
        out << report.to_json(true).dump(2) << "\n";
      }
      print_report(report);
      return report.pass ? 0 : 1;
    }

    if (sweep_cmd->parsed()) {
      SweepOptions opts;
      opts.grid = parse_grid(grid_spec);
      opts.quantities = split_csv(quantities_spec);
      opts.tol_scale = tol_scale;
      opts.threads = threads;
      if (have_seed) opts.seed = seed;
      std::string csv = sweep_csv(sc, opts);
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(out_path);
        if (!out) throw UsageError("cannot write CSV to " + out_path);
        out << csv;
      }
      return 0;
    }

    if (eval_cmd->parsed()) {
      auto parts = split_csv(point_spec);
      if (static_cast<int>(parts.size()) != sc.n)
        throw UsageError("--point needs " + std::to_string(sc.n) + " coordinates");
      Vec u(sc.n);
      for (int a = 0; a < sc.n; ++a) u[a] = std::stod(parts[a]);
      for (int a = 0; a < sc.n; ++a)
        if (u[a] < sc.domain[a][0] || u[a] > sc.domain[a][1])
          throw UsageError("point lies outside the scenario domain");
      std::cout << tensor_json(sc, u, tensor, literal_p).dump(2) << "\n";
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace gim::harness
