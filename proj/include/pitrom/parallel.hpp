#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pitrom {

inline int default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(i) for i in [0, count). Work items are claimed through a shared
/// atomic counter; fn must write only to per-index state so results are
/// identical for every worker count. The first exception thrown by a worker
/// is rethrown on the calling thread.
inline void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  if (workers <= 1 || count == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto run = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  std::vector<std::thread> pool;
  const int n_threads = std::min(workers, count);
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();

  if (error) std::rethrow_exception(error);
}

}  // namespace pitrom
