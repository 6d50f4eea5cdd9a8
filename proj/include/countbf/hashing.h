#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace countbf {

// One seed per hash function. A filter's ordered seed list is part of its
// identity: insert, lookup and delete must all use the same list.
struct HashSeed {
  uint64_t value = 0;

  friend bool operator==(HashSeed, HashSeed) = default;
};

// Keyed 64-bit hash of an arbitrary byte string.
//
// The body is MurmurHash64A (Austin Appleby): the seed is XOR-ed into the
// initial state together with len * m, input is consumed in 8-byte
// little-endian blocks, and the tail is mixed the same way as the reference.
// The result is then passed through the MurmurHash3 fmix64 finalizer, which
// gives full avalanche on short keys (decimal strings of 8..20 bytes are the
// common case here). The output is identical on every platform.
uint64_t Hash64(std::string_view key, HashSeed seed);

// MurmurHash3 64-bit finalizer.
constexpr uint64_t Fmix64(uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

// splitmix64 step; advances `state` and returns the next output.
constexpr uint64_t SplitMix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// First `count` pairwise-distinct values of the splitmix64 stream started at
// `master_seed`.
std::vector<HashSeed> ExpandSeeds(uint64_t master_seed, size_t count);

// Position of one hash value inside an x-by-y grid of cells holding eta
// counters each.
struct CellIndex {
  uint64_t row = 0;
  uint64_t col = 0;
  uint32_t counter = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

// (h mod rows, h mod cols, h mod counters_per_cell). Throws
// std::invalid_argument if any modulus is zero.
CellIndex DeriveIndices(uint64_t h, uint64_t rows, uint64_t cols,
                        uint32_t counters_per_cell);

// Golden-vector regression records: `hex(key) <TAB> seed <TAB> hash`, with the
// seed in decimal and the hash as 16 lowercase hex digits.
struct GoldenVector {
  std::string key;
  HashSeed seed;
  uint64_t hash = 0;
};

std::string FormatGoldenVector(const GoldenVector& v);
// Throws std::invalid_argument on a malformed line.
GoldenVector ParseGoldenVector(std::string_view line);

}  // namespace countbf
