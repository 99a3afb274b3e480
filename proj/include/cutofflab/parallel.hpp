#pragma once

#include <cstddef>
#include <functional>

namespace cutofflab {

/// Worker count: CUTOFFLAB_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Iterations are split into contiguous blocks,
/// one per worker; callers must only write to slots owned by index i.
/// Calls made from inside a worker run sequentially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cutofflab
