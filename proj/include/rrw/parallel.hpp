#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rrw {

/// Worker count: the explicit override if set, else RRW_THREADS, else the
/// hardware concurrency. Always at least 1.
std::size_t worker_count();

/// Overrides worker_count() for the current process (0 restores the default).
void set_worker_count(std::size_t n);

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Work is
/// handed out in contiguous chunks; callers write results into per-index
/// slots and reduce afterwards in index order, so results never depend on the
/// number of workers. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Maps every index to a value and returns the values in index order.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, F&& fn) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace rrw
