#pragma once

#include <cstdint>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hessquot {

// OpenMP wrappers used by the grid kernels. Every parallel routine here is
// bit-reproducible for any thread count: loop bodies write disjoint slots and
// reductions use only exact operations (max/min/compare), never sums.

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

template <typename Body>
void parallel_for(std::int64_t count, const Body& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) body(i);
#else
  for (std::int64_t i = 0; i < count; ++i) body(i);
#endif
}

template <typename Body>
void serial_for(std::int64_t count, const Body& body) {
  for (std::int64_t i = 0; i < count; ++i) body(i);
}

/// Argmax of eval(i) over i in [0,count); ties broken by lowest index.
/// Returns {index, value}; {-1, lowest} when count == 0.
template <typename Eval>
std::pair<std::int64_t, double> parallel_argmax(std::int64_t count, const Eval& eval) {
  std::int64_t best_i = -1;
  double best_v = -1.7976931348623157e308;
#ifdef _OPENMP
#pragma omp parallel
  {
    std::int64_t loc_i = -1;
    double loc_v = -1.7976931348623157e308;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < count; ++i) {
      const double v = eval(i);
      if (v > loc_v || (v == loc_v && (loc_i < 0 || i < loc_i))) {
        loc_v = v;
        loc_i = i;
      }
    }
#pragma omp critical(hessquot_argmax)
    {
      if (loc_i >= 0 &&
          (best_i < 0 || loc_v > best_v || (loc_v == best_v && loc_i < best_i))) {
        best_v = loc_v;
        best_i = loc_i;
      }
    }
  }
#else
  for (std::int64_t i = 0; i < count; ++i) {
    const double v = eval(i);
    if (best_i < 0 || v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
#endif
  return {best_i, best_v};
}

/// Exact parallel min-reduction of eval(i).
template <typename Eval>
double parallel_min(std::int64_t count, const Eval& eval) {
  double best = 1.7976931348623157e308;
#ifdef _OPENMP
#pragma omp parallel
  {
    double loc = 1.7976931348623157e308;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < count; ++i) {
      const double v = eval(i);
      if (v < loc) loc = v;
    }
#pragma omp critical(hessquot_min)
    {
      if (loc < best) best = loc;
    }
  }
#else
  for (std::int64_t i = 0; i < count; ++i) {
    const double v = eval(i);
    if (v < best) best = v;
  }
#endif
  return best;
}

}  // namespace hessquot
