#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <random>
#include <string_view>

namespace cptest {

/// splitmix64 finalizer. Seeds derived from it are well spread even for
/// adjacent inputs, which is what the per-replicate substreams rely on.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Folds (base, part, part, ...) into one engine seed. Every bootstrap
/// replicate, Monte Carlo repetition and method gets its own substream, so
/// results never depend on scheduling or worker count.
template <class... Parts>
constexpr std::uint64_t derive_seed(std::uint64_t base, Parts... parts) {
  std::uint64_t h = mix64(base);
  ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(parts)))), ...);
  return h;
}

/// FNV-1a, used to fold scenario labels into seed derivations.
constexpr std::uint64_t hash_label(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Tags keeping data generation and the two bootstrap methods on disjoint
/// substreams of the same user-visible seed.
namespace stream {
inline constexpr std::uint64_t kData = 0x64617461ull;
inline constexpr std::uint64_t kJmb = 0x6A6D62ull;
inline constexpr std::uint64_t kCusum = 0x637573756Dull;
}  // namespace stream

inline std::mt19937_64 make_engine(std::uint64_t derived_seed) {
  return std::mt19937_64(derived_seed);
}

}  // namespace cptest
