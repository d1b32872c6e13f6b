#pragma once

#include <cstdint>

namespace ocd {

// Counter-based generator ("splitmix64-ctr"): the k-th draw (k >= 1) of a
// stream is mix(mix(seed) + k * 0x9e3779b97f4a7c15) with mix the SplitMix64
// finalizer. Output depends only on (seed, k), so streams are reproducible
// on every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed)) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    ++counter_;
    return mix(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) by rejection, bound > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Stream key for trial `trial` of an experiment with base seed `seed`.
constexpr std::uint64_t trial_stream(std::uint64_t seed, std::uint64_t trial) { return seed ^ trial; }

}  // namespace ocd
