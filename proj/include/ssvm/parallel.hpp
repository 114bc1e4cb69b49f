#pragma once

#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ssvm {

// Execution policy for the data-parallel kernels (per-sample inference,
// gradient batches, batch prediction). threads == 1 selects the plain serial
// loop, which is the reference path the tests compare against; threads == 0
// uses all hardware threads via OpenMP; threads > 1 pins the team size.
//
// Every kernel writes per-index results into preallocated slots and leaves
// reductions to a fixed-order serial pass, so results are bit-identical for
// any thread count.
struct ExecPolicy {
  int threads = 1;

  bool parallel() const { return threads != 1; }

  static ExecPolicy serial() { return ExecPolicy{1}; }
  static ExecPolicy max_parallel() { return ExecPolicy{0}; }
};

template <class Fn>
void parallel_for(int n, [[maybe_unused]] const ExecPolicy& policy, Fn&& fn) {
#ifdef _OPENMP
  if (policy.parallel() && n > 1) {
    const int team = policy.threads > 0 ? policy.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (int i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
#endif
  for (int i = 0; i < n; ++i) {
    fn(i);
  }
}

}  // namespace ssvm
