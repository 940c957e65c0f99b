#pragma once

// Fixed-size worker pool for independent per-index work. Results are written
// by index, so output order never depends on scheduling.

#include <cstddef>
#include <functional>

namespace moebius_lab {

/// hardware_concurrency, capped by MOEBIUS_LAB_THREADS when set to a positive
/// integer.
unsigned worker_count();

/// Calls fn(i) for i in [0, count) on up to `workers` threads (0 = worker_count()).
/// The first exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned workers = 0);

}  // namespace moebius_lab
