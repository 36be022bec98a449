#pragma once

#include <functional>

namespace robust_sysid {

// Worker cap: ROBUST_SYSID_THREADS when set to a positive integer, otherwise
// the hardware concurrency (at least 1).
int worker_count();

// Runs fn(i) for i = 0..count-1 across workers. Callers write results into
// per-index slots they own, so output never depends on scheduling order. The
// first exception thrown by any fn is rethrown after all workers finish.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace robust_sysid
