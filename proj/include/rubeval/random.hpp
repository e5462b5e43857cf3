#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace rubeval {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based seed derivation: h = mix(master); for each c: h = mix(h ^ mix(c)).
/// A stream depends only on the master seed and its path, never on the
/// order in which streams are consumed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t c : path) h = splitmix64(h ^ splitmix64(c));
  return h;
}

/// Unbiased draw from [0, n), identical across standard libraries.
inline std::size_t uniform_index(std::mt19937_64& engine, std::size_t n) {
  const std::uint64_t range = n;
  const std::uint64_t threshold = (0 - range) % range;
  while (true) {
    std::uint64_t r = engine();
    if (r >= threshold) return static_cast<std::size_t>(r % range);
  }
}

}  // namespace rubeval
