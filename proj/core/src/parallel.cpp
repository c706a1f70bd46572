#include "mohardy/parallel.hpp"

#include <atomic>
#include <mutex>
#include <thread>
#include <vector>

namespace mohardy {

namespace {
std::atomic<unsigned> g_threads{1};
}

unsigned worker_threads() { return g_threads.load(std::memory_order_relaxed); }

void set_worker_threads(unsigned count) {
  g_threads.store(std::max(1u, count), std::memory_order_relaxed);
}

namespace detail {

void run_chunked(std::size_t count,
                 const std::function<void(std::size_t, std::size_t)>& chunk) {
  const std::size_t workers =
      std::min<std::size_t>(worker_threads(), count);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        chunk(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail
}  // namespace mohardy
