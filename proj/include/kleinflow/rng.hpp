#pragma once

#include <cstdint>

namespace kleinflow {

/// SplitMix64: tiny deterministic generator, identical on every platform.
/// Used for parameter sampling in identity suites and property tests.
struct SplitMix64 {
  std::uint64_t state{0x9e3779b97f4a7c15ull};

  explicit SplitMix64(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
};

}  // namespace kleinflow
