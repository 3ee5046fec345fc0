// Counter-seeded splittable RNG used by all simulators. Streams derived from
// (seed, replica) are independent and reproducible across runs.
#pragma once

#include <cmath>
#include <cstdint>

namespace inswap {

// splitmix64: tiny, fast, and splittable; adequate for Monte Carlo here.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1); never returns 0, so logs are safe.
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  // Decorrelated per-replica stream seed.
  static std::uint64_t stream(std::uint64_t seed, std::uint64_t replica) {
    SplitMix64 mix(seed ^ (0x9E3779B97F4A7C15ULL * (replica + 1)));
    return mix.next();
  }
};

}  // namespace inswap
