// parallel.hpp: Minimal fork-join over an index range

#pragma once

#include <cstddef>
#include <functional>

namespace sln::detail {

// Worker count: `requested` if nonzero, else $SLN_THREADS, else hardware concurrency.
unsigned resolve_threads(unsigned requested);

// Calls body(i) for every i in [0, count) using up to `threads` workers.
// Items are handed out dynamically; the first exception is rethrown after join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace sln::detail
