#pragma once

#include <functional>

namespace gim {

/// Run fn(0..count-1). threads == 1 is the serial reference path; threads == 0
/// uses the OpenMP default team, any other value pins the team size. Work per
/// index must be independent; results must be written to disjoint slots so
/// the output is identical for every thread count.
void parallel_for_index(int count, int threads, const std::function<void(int)>& fn);

/// Threads the runtime would use for threads == 0.
int default_thread_count();

}  // namespace gim
