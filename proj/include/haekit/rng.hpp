#pragma once

#include <cstdint>

namespace haekit {

/// xorshift64* generator. Used wherever seeded, cross-platform reproducible
/// draws are required (cluster seeding, test data generation); the standard
/// library distributions are implementation-defined and would break
/// bit-for-bit reproducibility across toolchains.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed) {
    // splitmix64 expansion so that small seeds (including 0) give a
    // well-mixed nonzero state.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    state_ = z ^ (z >> 31);
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
  }

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace haekit
