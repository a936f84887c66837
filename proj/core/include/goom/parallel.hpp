#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace goom {

/// Worker count used when a caller passes 0: GOOM_WORKERS if set, otherwise
/// the number of hardware threads.
int default_workers() noexcept;

/// Runs body(i) for i in [0, n) on up to `workers` OpenMP threads using a
/// static schedule with the given chunk size. The first exception thrown by
/// any iteration is rethrown on the calling thread once the loop finishes.
template <class Body>
void parallel_for(std::size_t n, int workers, std::size_t chunk, Body&& body) {
  if (n == 0) return;
  if (chunk == 0) chunk = 1;
  if (workers <= 0) workers = default_workers();
  if (workers == 1 || n <= chunk) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const long long count = static_cast<long long>(n);
  const int sched_chunk = static_cast<int>(chunk);
#pragma omp parallel for num_threads(workers) schedule(static, sched_chunk)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace goom
