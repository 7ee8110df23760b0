#pragma once

#include <cstddef>
#include <functional>

namespace choquard {

// Worker count: min(hardware_concurrency, CHOQUARD_THREADS) when the
// environment variable is set, else hardware_concurrency.
int thread_count();

// Runs fn(i) for i in [0, n).  Work items must be independent; results should
// be written to pre-sized slots so that the output order is deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace choquard
