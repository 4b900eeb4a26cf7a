#pragma once

// Seeded generator used for every randomized trial.  The engine is
// std::mt19937_64, whose output sequence is fixed by the C++ standard; the
// mappings to integer ranges and to [0, 1) are defined here rather than via
// <random> distributions, whose algorithms differ between standard libraries.

#include <cstdint>
#include <initializer_list>
#include <random>

#include "gl3ks/arith.hpp"

namespace gl3ks {

/// Mixes a base seed with grid coordinates (splitmix64 finalizer), so each
/// grid point draws from its own stream regardless of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<Int> coords) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  for (Int c : coords) h = mix(h ^ static_cast<std::uint64_t>(c));
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi], by rejection sampling.
  Int uniform_int(Int lo, Int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<Int>(next());
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + static_cast<Int>(x % span);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin() { return (next() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gl3ks
