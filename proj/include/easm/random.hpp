#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace easm {

// All stochastic choices draw from this engine. mt19937_64 output is fixed by
// the standard; the helpers below avoid the implementation-defined
// std::*_distribution algorithms so seeded runs match across toolchains.
using Rng = std::mt19937_64;

// Independent child seed for (base, stream), via one splitmix64 round.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform in [0, 1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform in [0, bound). bound must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t bound) {
  const std::uint64_t range = bound;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return static_cast<std::size_t>(draw % range);
}

}  // namespace easm
