#ifndef SLG_PARALLEL_HPP
#define SLG_PARALLEL_HPP

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace slg {

enum class Exec { Serial, Parallel };

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Runs f(i) for i in [0, n). The parallel path uses OpenMP when compiled
// in; results must be written to disjoint slots so that serial and parallel
// executions are bit-identical.
template <class F>
void for_each_index(std::size_t n, Exec exec, F&& f) {
#ifdef _OPENMP
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      f(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) f(i);
}

// Partition-and-merge reduction: each worker folds its slice into a
// thread-local accumulator with fold(acc, i); partials are merged in slice
// order with merge(total, acc), so any commutative-monoid merge gives
// results identical to the serial fold.
template <class Acc, class Fold, class Merge>
Acc reduce_indexed(std::size_t n, Exec exec, Fold&& fold, Merge&& merge) {
  Acc total{};
#ifdef _OPENMP
  if (exec == Exec::Parallel) {
    int workers = omp_get_max_threads();
    std::vector<Acc> partial(static_cast<std::size_t>(workers));
#pragma omp parallel num_threads(workers)
    {
      int w = omp_get_thread_num();
      Acc acc{};
#pragma omp for schedule(static)
      for (long long i = 0; i < static_cast<long long>(n); ++i)
        fold(acc, static_cast<std::size_t>(i));
      partial[static_cast<std::size_t>(w)] = std::move(acc);
    }
    for (auto& acc : partial) merge(total, acc);
    return total;
  }
#else
  (void)exec;
#endif
  Acc acc{};
  for (std::size_t i = 0; i < n; ++i) fold(acc, i);
  merge(total, acc);
  return total;
}

}  // namespace slg

#endif  // SLG_PARALLEL_HPP
