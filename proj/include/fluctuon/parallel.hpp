#pragma once

#include <cstddef>
#include <functional>

namespace fluctuon {

/// Worker count: FLUCTUON_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs fn(i) for i in [0, n). Each index is executed exactly once; callers
/// write results into pre-sized slots so output order never depends on
/// scheduling. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace fluctuon
