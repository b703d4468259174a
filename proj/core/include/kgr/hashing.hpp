#pragma once

#include <cstdint>
#include <string_view>

#include "kgr/types.hpp"

namespace kgr {

// MurmurHash3 finalizer: a bijective 64-bit avalanche mix.
constexpr std::uint64_t fmix64(std::uint64_t x) noexcept {
  x ^= x >> 33;
  x *= 0xFF51AFD7ED558CCDULL;
  x ^= x >> 33;
  x *= 0xC4CEB9FE1A85EC53ULL;
  x ^= x >> 33;
  return x;
}

// SplitMix64 step; used to expand one seed into a stream of seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t combine_seed(std::uint64_t seed,
                                     std::uint64_t value) noexcept {
  return fmix64(seed ^ fmix64(value + 0x9E3779B97F4A7C15ULL));
}

// Platform-independent 64-bit key of a triple's (head, relation, tail)
// encoding.
constexpr std::uint64_t triple_key(const Triple& t) noexcept {
  const std::uint64_t ht =
      (static_cast<std::uint64_t>(t.head) << 32) | t.tail;
  return fmix64(fmix64(ht) ^ (static_cast<std::uint64_t>(t.relation) *
                              0xD6E8FEB86659FD93ULL));
}

// FNV-1a, for fingerprints of text.
constexpr std::uint64_t fnv1a(std::string_view text,
                              std::uint64_t h = 0xCBF29CE484222325ULL) noexcept {
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace kgr
