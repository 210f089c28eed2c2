// parallel.hpp — minimal order-stable worker pool for grid sweeps

#pragma once

#include <cstddef>
#include <functional>

namespace wqed {

// Worker count: WQED_THREADS if set and positive, otherwise the hardware
// concurrency (0 = auto).
std::size_t worker_count();

// Calls fn(i) for i in [0, n). Work items must write to disjoint outputs;
// the first exception thrown by any item is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wqed
