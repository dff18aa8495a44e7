#pragma once

#include <cstdint>
#include <random>

namespace qna {

// Seeded random primitives used everywhere a contract promises determinism.
// std::uniform_*_distribution is implementation-defined, so raw engine words
// are mapped to values by hand and results are reproducible across standard
// libraries.

inline double uniform01_open(std::mt19937_64& rng) {
  // (0, 1]: 53-bit mantissa, never returns 0
  return 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform01(std::mt19937_64& rng) {
  // [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace qna
