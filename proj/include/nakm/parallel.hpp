#pragma once

#include <cstddef>
#include <functional>

namespace nakm {

/// Worker count: NA_CLUSTER_THREADS when set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// is visited exactly once; the first exception thrown by any worker is
/// rethrown after all workers have joined. Calls made from inside a worker
/// run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nakm
