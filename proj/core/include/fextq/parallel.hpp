#pragma once

#include <cstddef>
#include <functional>

namespace fextq {

//! Worker count from FEXTQ_THREADS, else the hardware concurrency (at least 1).
std::size_t default_thread_count();

//! Calls body(i) for i in [0, count) on up to `threads` workers. Each index
//! runs exactly once; callers write results to slot i so the outcome never
//! depends on scheduling. The first exception thrown by body is rethrown.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

} // namespace fextq
