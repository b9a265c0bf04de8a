#pragma once

#include <cstddef>
#include <functional>

namespace navier_bubble {

// Worker count: NAVIER_BUBBLE_THREADS if set and positive, else the hardware
// concurrency (at least one).
unsigned worker_count();

// Runs body(i) for i in [0, count). The first exception thrown by any body is
// rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace navier_bubble
