#pragma once

#include <cstdint>
#include <random>

namespace affsv {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent engine for (seed, path, stream), e.g. stream 0 for the jumps of
/// X and stream 1 for the Gaussian noise of Y. Depends only on the triple, so
/// any path can be regenerated in isolation and in any order.
inline std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path, std::uint64_t stream) {
  const std::uint64_t key = splitmix64(seed ^ splitmix64(path * 0x100000001b3ULL + stream));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(path)};
  return std::mt19937_64(seq);
}

}  // namespace affsv
