#pragma once

#include <cstddef>
#include <functional>

namespace modelswitch {

// Process-wide worker count used by the learners. 0 resets to the hardware
// concurrency. Results never depend on this value.
void set_worker_count(std::size_t n);
std::size_t worker_count();
std::size_t max_worker_count();

// Runs body(i) for i in [0, n) across worker_count() threads. Each index is
// visited exactly once; exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace modelswitch
