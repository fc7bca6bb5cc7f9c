#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rbgk {

/// Worker count: an explicit request (command line) wins, then the
/// RBGK_THREADS environment variable, then the configured value, then 1.
/// Nonpositive values mean "not set".
int resolve_thread_count(int requested, int configured = 0);

/// Runs body(i) for i in [0, n) on up to `threads` workers with a static
/// contiguous partition. Each index is handled by exactly one worker, so
/// callers that write per-index results and reduce afterwards get results
/// independent of the thread count. The first exception thrown by any
/// worker is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace rbgk
