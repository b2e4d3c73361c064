#pragma once

#include <cstddef>
#include <functional>

namespace ftjc {

/// Worker count from FTJC_WORKERS, else the hardware concurrency (at least 1).
/// Throws Error{config} if the variable is set but not a positive integer.
unsigned worker_count();

/// Calls body(i) for i in [0, n) on up to `workers` threads with dynamic
/// scheduling. If any call throws, the exception of the smallest failing
/// index is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned workers = worker_count());

}  // namespace ftjc
