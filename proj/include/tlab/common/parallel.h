#pragma once

#include <cstddef>
#include <functional>

namespace tlab {

// Worker count: TRABSA_LAB_THREADS if set to a positive integer, else the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Runs fn(i) for i in [0, n) across worker_count() threads. Each index is
// visited exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling. The first exception thrown by any
// task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace tlab
