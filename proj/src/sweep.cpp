#include <algorithm>
#include <cmath>
#include <sstream>

#include "gim/errors.hpp"
#include "gim/harness.hpp"
#include "gim/parallel.hpp"

namespace gim::harness {

std::string sweep_csv(const Scenario& sc, const SweepOptions& opts) {
  if (static_cast<int>(opts.grid.size()) != sc.n)
    throw UsageError("sweep grid needs one resolution per parameter axis");
  for (int c : opts.grid)
    if (c < 2) throw UsageError("sweep grid resolution must be at least 2 per axis");
  if (opts.quantities.empty()) throw UsageError("sweep needs at least one quantity");
  auto known = sweep_quantities();
  for (const auto& q : opts.quantities)
    if (std::find(known.begin(), known.end(), q) == known.end())
      throw UsageError("unknown sweep quantity '" + q + "'");

  Scenario scenario = sc;
  if (opts.seed) scenario.seed = *opts.seed;

  // inclusive grid over the full declared domain; singular rows surface as
  // flagged NaNs rather than being dodged
  std::vector<std::vector<double>> axes(sc.n);
  for (int a = 0; a < sc.n; ++a) {
    double lo = sc.domain[a][0], hi = sc.domain[a][1];
    for (int i = 0; i < opts.grid[a]; ++i)
      axes[a].push_back(lo + (hi - lo) * i / (opts.grid[a] - 1));
  }
  std::vector<Vec> grid_points;
  std::vector<int> idx(sc.n, 0);
  while (true) {
    Vec u(sc.n);
    for (int a = 0; a < sc.n; ++a) u[a] = axes[a][idx[a]];
    grid_points.push_back(u);
    int a = sc.n - 1;
    while (a >= 0) {
      if (++idx[a] < static_cast<int>(axes[a].size())) break;
      idx[a] = 0;
      --a;
    }
    if (a < 0) break;
  }

  std::vector<PointRecord> records(grid_points.size());
  parallel_for_index(static_cast<int>(grid_points.size()), opts.threads, [&](int i) {
    records[i] = evaluate_point(scenario, grid_points[i], i, opts.tol_scale,
                                /*stop_on_identity_failure=*/false);
  });

  std::ostringstream os;
  os.precision(17);
  for (int a = 0; a < sc.n; ++a) os << "u" << a + 1 << ",";
  for (const auto& q : opts.quantities) os << q << ",";
  os << "regular\n";

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    bool regular = true;
    for (const auto& c : rec.checks)
      if (!c.pass && is_gate_check(c.name)) regular = false;
    for (int a = 0; a < sc.n; ++a) os << grid_points[i][a] << ",";
    for (const auto& q : opts.quantities) {
      auto it = rec.quantities.find(q);
      if (it == rec.quantities.end() || !std::isfinite(it->second))
        os << "nan";
      else
        os << it->second;
      os << ",";
    }
    os << (regular ? 1 : 0) << "\n";
  }
  return os.str();
}

}  // namespace gim::harness
