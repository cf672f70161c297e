#pragma once

#include <cstdint>

namespace expdet {

// SplitMix64 (Steele, Lea, Flood). One 64-bit seed fully determines the
// stream, which is the reproducibility contract for everything random in
// this library.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Uniform integer in [0, n). Modulo bias is irrelevant at the sizes used.
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

  bool next_bernoulli(double p) { return next_unit() < p; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Decorrelated generator for (seed, index). Gives each Monte Carlo sample
  // and each verification instance its own stream, so enumeration order and
  // thread count cannot change what is drawn.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t s = mix(seed + 0x9E3779B97F4A7C15ull) ^
                            mix(index * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull);
    return SplitMix64(s);
  }

 private:
  std::uint64_t state_;
};

}  // namespace expdet
