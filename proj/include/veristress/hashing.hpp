#pragma once

#include <cstdint>
#include <string_view>

namespace veristress {

// Engine-wide hash seed. Published constant: changing it changes every
// embedding and every per-claim noise stream, so it is fixed for good.
inline constexpr std::uint64_t kHashSeed = 0x9e3779b97f4a7c15ULL;

// 64-bit FNV-1a over bytes, folded through a murmur-style finalizer so the
// low bits are usable as bucket indices.
inline std::uint64_t stable_hash(std::string_view s, std::uint64_t seed = kHashSeed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

// Combines an integer seed with a string key (per-claim noise streams).
inline std::uint64_t stable_hash_combine(std::uint64_t seed, std::string_view key) {
  std::uint64_t h = stable_hash(key, seed ^ kHashSeed);
  return h ^ (seed * 0xbf58476d1ce4e5b9ULL);
}

}  // namespace veristress
