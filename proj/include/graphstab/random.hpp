#pragma once

#include <cstdint>
#include <random>

namespace graphstab {

// splitmix64 finaliser. Derives independent sub-seeds from (seed, stream) so
// every trial owns its own generator and a parallel trial schedule produces
// the same numbers as a serial one.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace graphstab
