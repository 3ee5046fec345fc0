#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace inswap {

// Runs body(i) for i in [0, n). Work is pulled from a shared counter, so the
// assignment of indices to threads is dynamic but every index runs once;
// callers must make iterations independent. The first exception thrown by
// any iteration stops the remaining work and is rethrown to the caller.
inline void parallel_for(std::int64_t n, int jobs,
                         const std::function<void(std::int64_t)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> counter{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::int64_t i = counter.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int threads = static_cast<int>(std::min<std::int64_t>(jobs, n));
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace inswap
