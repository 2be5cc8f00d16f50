#pragma once

#include <functional>

namespace plab {

// Runs body(begin, end) over a static partition of [0, n) into contiguous
// chunks, one per worker thread.  Results must be written to per-index
// slots: since every sampling unit owns its own RNG stream, the partition
// (and hence the thread count) cannot influence any output bit.
// n_threads <= 0 picks std::thread::hardware_concurrency().
void parallel_for(long n, int n_threads,
                  const std::function<void(long, long)>& body);

}  // namespace plab
