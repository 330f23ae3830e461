#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace hawkes {

/// Worker count from HAWKES_UQ_THREADS, else the hardware concurrency.
int worker_count();

/// Runs fn(k) for k in [0, n) across worker_count() threads.  Work items
/// must be independent; results are the caller's to place by index, so the
/// outcome never depends on scheduling.  If several items throw, the
/// exception from the lowest index is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, worker_count())));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;
  auto body = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < n;) {
      try {
        fn(k);
      } catch (...) {
        std::lock_guard lock(mu);
        if (k < failed_at) {
          failed_at = k;
          failure = std::current_exception();
        }
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hawkes
