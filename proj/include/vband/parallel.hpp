#ifndef VBAND_PARALLEL_HPP_
#define VBAND_PARALLEL_HPP_

#include <cstddef>

namespace vband {

/// Serial is the reference path. OpenMP runs the same per-element kernels
/// with a static schedule, so both produce bit-identical results.
enum class Backend { kSerial, kOpenMP };

struct ExecutionPolicy {
  Backend backend = Backend::kSerial;
  int workers = 1;

  static ExecutionPolicy serial() { return {}; }
  static ExecutionPolicy openmp(int n) { return {Backend::kOpenMP, n}; }
  static ExecutionPolicy from_workers(int n) {
    return n > 1 ? openmp(n) : serial();
  }
};

/// Runs fn(i) for i in [0, n). `Fn` must only write to data owned by index i.
template <typename Fn>
void for_each_index(const ExecutionPolicy& policy, int n, Fn&& fn) {
  if (policy.backend == Backend::kSerial || n < 2) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
#pragma omp parallel for schedule(static) num_threads(policy.workers)
  for (int i = 0; i < n; ++i) fn(i);
}

}  // namespace vband

#endif  // VBAND_PARALLEL_HPP_
