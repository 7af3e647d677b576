#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gcm {

/// 0 means "one worker per hardware thread".
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(i) for every i in [0, n). Work items must be independent; each
/// result depends only on its index, so output is identical for any worker
/// count. The first exception thrown by a worker is rethrown here.
template <class Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
  const std::size_t nw = std::min<std::size_t>(resolve_workers(workers), n);
  if (nw <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nw - 1);
  for (std::size_t w = 1; w < nw; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace gcm
