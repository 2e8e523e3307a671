#pragma once

#include <cstddef>
#include <functional>

namespace robin {

// Worker count: ROBIN_SQUARE_THREADS if set to a positive integer, otherwise
// the hardware concurrency (at least 1).
int thread_count();

// Runs body(i) for i in [0, n) on up to `threads` workers (0 = thread_count()).
// Indices are split into contiguous blocks, so callers that write results by
// index get output independent of the thread count. If workers throw, one of
// the exceptions is rethrown on the calling thread after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  int threads = 0);

}  // namespace robin
