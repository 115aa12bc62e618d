#pragma once

#include <cstddef>
#include <functional>

namespace hawkes {

// Worker count used when a caller passes 0: HAWKES_THREADS if set, otherwise
// std::thread::hardware_concurrency().
unsigned default_thread_count();

// Runs body(k) for k in [0, count) on up to `threads` workers. Work items are
// claimed dynamically; results must be written to per-index slots so that the
// outcome does not depend on scheduling. The first exception thrown by any
// item is rethrown after all workers have joined.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace hawkes
