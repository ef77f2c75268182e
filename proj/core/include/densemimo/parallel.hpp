#pragma once

#include <cstddef>
#include <functional>

namespace densemimo {

/// Worker count: `requested` (0 means hardware concurrency), capped by the
/// DENSEMIMO_THREADS environment variable when it holds a positive integer.
[[nodiscard]] std::size_t worker_count(std::size_t requested = 0);

/// Calls body(i) for i in [0, n) on up to `workers` threads. The first exception thrown
/// by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace densemimo
