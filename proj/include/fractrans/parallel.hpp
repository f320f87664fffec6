#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fractrans {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> n{0};
  return n;
}
}  // namespace detail

/// Caps the worker threads used by raster loops. 0 means hardware concurrency.
inline void set_thread_count(unsigned n) { detail::thread_setting() = n; }

inline unsigned thread_count() {
  const unsigned n = detail::thread_setting();
  if (n != 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [begin, end) over contiguous static blocks. Each index
// is visited by exactly one thread, so writes to disjoint rows never race and
// results do not depend on the thread count. The first exception is rethrown.
template <typename Body>
void parallel_for(int begin, int end, Body&& body) {
  const int n = end - begin;
  if (n <= 0) return;
  const int workers = static_cast<int>(std::min<unsigned>(thread_count(), static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const int lo = begin + static_cast<int>(static_cast<long long>(n) * w / workers);
    const int hi = begin + static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    pool.emplace_back([&, lo, hi] {
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fractrans
