#pragma once

#include <cstdint>
#include <vector>

namespace gbm {

/// SplitMix64 (Steele, Lea & Flood 2014). Chosen as the scenario PRNG because
/// the recurrence is fully specified by these constants, so seeded streams are
/// bit-identical on every platform, and `split()` derives independent
/// substreams for parallel workers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Unbiased-enough integer in [0, n) for shuffling (n is tiny vs 2^64).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  /// Independent substream; advances this stream by one draw.
  SplitMix64 split() { return SplitMix64(next_u64()); }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates shuffle driven by SplitMix64, for reproducible orderings.
template <class T>
void deterministic_shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace gbm
