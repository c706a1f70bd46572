#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>

namespace mohardy {

/// Number of worker threads used by parallel_for. Defaults to 1.
unsigned worker_threads();
void set_worker_threads(unsigned count);

namespace detail {
void run_chunked(std::size_t count,
                 const std::function<void(std::size_t, std::size_t)>& chunk);
}

/// Runs body(i) for i in [0, count). Iterations are split into contiguous
/// chunks, one per worker; every iteration must write to its own output slot
/// so results never depend on the thread count.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  if (count == 0) return;
  if (worker_threads() <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  detail::run_chunked(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) body(i);
  });
}

}  // namespace mohardy
