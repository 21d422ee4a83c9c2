#pragma once

#include <cstddef>
#include <functional>

namespace nflab {

// Worker count: hardware concurrency, capped by NFLAB_THREADS when set.
unsigned worker_count();

// Runs fn(i) for i in [0, n). Callers write results by index, so output order
// never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace nflab
