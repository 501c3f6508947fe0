// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <random>

namespace dgnet {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) {
  const std::uint64_t mix = seed ^ static_cast<std::uint64_t>(0x9e3779b97f4a7c15ull);
  std::seed_seq seq{seed, mix, static_cast<std::uint64_t>(~seed)};
  return Rng(seq);
}

// Independent stream for chain/replicate `index` derived from a base seed.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t mix =
      seed ^ (index * static_cast<std::uint64_t>(0x9e3779b97f4a7c15ull));
  std::seed_seq seq{seed, index, mix};
  return Rng(seq);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double standard_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace dgnet
