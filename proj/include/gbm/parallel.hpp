#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gbm::par {

/// Reductions accumulate per-block partial results over blocks of this fixed
/// size and combine them in block order, so sums do not depend on the thread
/// count. One run with OMP_NUM_THREADS=1 and one with 16 produce identical
/// bits.
inline constexpr std::ptrdiff_t kReductionBlock = 1024;

/// Loops below this many indices run serial inline: on the production mesh
/// (2116 nodes) the per-region OpenMP overhead exceeds the loop body. Heavy
/// bodies (transcendentals per index) pass kHeavyGrain instead. Calibrated
/// with the bench_kernels tool.
inline constexpr std::ptrdiff_t kSerialGrain = 8192;
inline constexpr std::ptrdiff_t kHeavyGrain = 1024;

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <class Body>
void parallel_for(std::ptrdiff_t n, Body&& body, std::ptrdiff_t grain = kSerialGrain) {
#ifdef _OPENMP
  if (n >= grain) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
  }
#else
  (void)grain;
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

namespace detail {

inline std::ptrdiff_t block_count(std::ptrdiff_t n) {
  return (n + kReductionBlock - 1) / kReductionBlock;
}

/// Runs the identical block decomposition serially or under OpenMP; the
/// combine order never changes, so the result is independent of both the
/// thread count and the serial/parallel decision.
template <class BlockFn, class Combine>
double block_reduce(std::ptrdiff_t n, double init, BlockFn&& block_fn, Combine&& combine) {
  const std::ptrdiff_t nb = block_count(n);
  if (nb == 1) return combine(init, block_fn(0, n));
  std::vector<double> partial(static_cast<std::size_t>(nb));
  parallel_for(
      nb,
      [&](std::ptrdiff_t b) {
        const std::ptrdiff_t lo = b * kReductionBlock;
        partial[static_cast<std::size_t>(b)] = block_fn(lo, std::min(n, lo + kReductionBlock));
      },
      kSerialGrain / kReductionBlock);
  double acc = init;
  for (double p : partial) acc = combine(acc, p);
  return acc;
}

}  // namespace detail

/// Deterministic parallel sum of term(i) for i in [0, n).
template <class Term>
double block_sum(std::ptrdiff_t n, Term&& term) {
  if (n <= 0) return 0.0;
  return detail::block_reduce(
      n, 0.0,
      [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
        double s = 0.0;
        for (std::ptrdiff_t i = lo; i < hi; ++i) s += term(i);
        return s;
      },
      [](double a, double b) { return a + b; });
}

/// Deterministic parallel min of term(i); n must be >= 1.
template <class Term>
double block_min(std::ptrdiff_t n, Term&& term) {
  return detail::block_reduce(
      n, term(0),
      [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
        double m = term(lo);
        for (std::ptrdiff_t i = lo + 1; i < hi; ++i) m = std::min(m, term(i));
        return m;
      },
      [](double a, double b) { return std::min(a, b); });
}

template <class Term>
double block_max(std::ptrdiff_t n, Term&& term) {
  return -block_min(n, [&](std::ptrdiff_t i) { return -term(i); });
}

}  // namespace gbm::par
