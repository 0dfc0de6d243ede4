#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pelvar {

/// Process-wide worker cap; 0 means "use hardware concurrency".
inline std::atomic<unsigned>& max_threads_setting() {
  static std::atomic<unsigned> value{0};
  return value;
}

inline void set_max_threads(unsigned n) { max_threads_setting().store(n); }

inline unsigned worker_count() {
  unsigned cap = max_threads_setting().load();
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return cap;
}

inline bool& inside_parallel_region() {
  thread_local bool flag = false;
  return flag;
}

/// Runs body(i) for i in [0, n) on up to worker_count() threads.
/// Jobs are claimed dynamically; callers write results into slot i so output
/// order never depends on scheduling. The first exception is rethrown.
/// Nested calls from inside a worker run serially.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1 || inside_parallel_region()) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    const bool outer = inside_parallel_region();
    inside_parallel_region() = true;
    struct Reset {
      bool value;
      ~Reset() { inside_parallel_region() = value; }
    } reset{outer};
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pelvar
