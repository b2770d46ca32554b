#pragma once

#include <cstddef>
#include <functional>

namespace metrobound {

// METROBOUND_THREADS if set and positive, otherwise the hardware concurrency.
int default_thread_count();

// Calls f(i) for i in [0, n) on up to `threads` workers (0 means default_thread_count()).
// Each index is handled exactly once; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f, int threads = 0);

}  // namespace metrobound
