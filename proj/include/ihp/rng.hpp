#pragma once

#include <cstdint>

namespace ihp {

// SplitMix64 finalizer. Used both as the output function of the generator
// below and as the hash for stream derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based generator: output i of a stream is
//   mix64(key + i * golden),  key = mix64(master ^ mix64(stream_id)).
// Streams derived from the same master seed never share state, so trials
// can run in parallel and still replay bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix64(seed)) {}

  Rng(std::uint64_t master, std::uint64_t stream_id)
      : key_(mix64(master ^ mix64(stream_id))) {}

  std::uint64_t next() {
    counter_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = key_ + counter_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bit() { return (next() >> 63) != 0; }

  // Uniform integer in [0, bound) by bitmask rejection; exact for any bound.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t mask = ~0ULL >> __builtin_clzll((bound - 1) | 1);
    for (;;) {
      std::uint64_t r = next() & mask;
      if (r < bound) return r;
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ihp
