#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace natlearn {

// All randomness flows through explicit Rng handles. Helpers below only use
// raw 64-bit outputs so that results do not depend on the standard library's
// distribution implementations.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seed of the independent substream (seed, label, shard).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                                    std::uint64_t shard = 0) noexcept {
  return splitmix64(splitmix64(seed ^ fnv1a(label)) + splitmix64(shard + 0x51ed27ULL));
}

inline Rng make_rng(std::uint64_t seed, std::string_view label, std::uint64_t shard = 0) {
  return Rng(derive_seed(seed, label, shard));
}

// Fresh child stream drawn from a parent handle.
inline Rng split(Rng& parent) { return Rng(splitmix64(parent())); }

inline bool random_bit(Rng& rng) { return (rng() >> 63) != 0; }

inline int random_sign(Rng& rng) { return random_bit(rng) ? -1 : 1; }

// Uniform integer in [0, bound); bound > 0. Rejection keeps it unbiased.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if ((bound & (bound - 1)) == 0) return rng() & (bound - 1);
  const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace natlearn
