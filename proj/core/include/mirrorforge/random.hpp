#pragma once

#include <cstdint>

namespace mirrorforge {

// xorshift64* generator. State update:
//   x ^= x >> 12; x ^= x << 25; x ^= x >> 27; output = x * 0x2545F4914F6CDD1D
// The seed is passed through one splitmix64 step so that seed 0 is usable.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed);

  std::uint64_t next();
  // Uniform double in [0, 1) from the top 53 bits.
  double uniform();
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace mirrorforge
