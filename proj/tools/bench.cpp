// Compares the serial reference loop against the OpenMP point loop on a
// denser-than-default grid and verifies the reports are identical.

#include <chrono>
#include <iostream>

#include "gim/harness.hpp"
#include "gim/parallel.hpp"

using namespace gim::harness;

namespace {

double timed_run(const Scenario& sc, int threads, CheckReport& out) {
  auto t0 = std::chrono::steady_clock::now();
  RunOptions opts;
  opts.threads = threads;
  out = run_checks(sc, opts);
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  Scenario sc = builtin("torus_of_revolution");
  sc.grid = {24, 24};

  CheckReport serial, parallel;
  double t_serial = timed_run(sc, 1, serial);
  int team = gim::default_thread_count();
  double t_parallel = timed_run(sc, 0, parallel);

  bool identical = serial.to_json(false).dump() == parallel.to_json(false).dump();

  std::cout << "benchmark: torus_of_revolution, 576 points\n"
            << "  serial (1 thread):   " << t_serial << " ms\n"
            << "  openmp (" << team << " threads):  " << t_parallel << " ms\n"
            << "  speedup:             " << t_serial / t_parallel << "x\n"
            << "  reports identical:   " << (identical ? "yes" : "NO") << "\n";
  return identical ? 0 : 1;
}
