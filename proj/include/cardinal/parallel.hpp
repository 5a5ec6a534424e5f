#ifndef CARDINAL_PARALLEL_HPP
#define CARDINAL_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace cardinal {

// Global worker count: set from the CLI (--threads / MATERN_CARDINAL_THREADS),
// defaults to hardware concurrency.
int thread_count();
void set_thread_count(int n);

// Deterministic parallel map: fn(i) writes to disjoint slots only.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

} // namespace cardinal

#endif
