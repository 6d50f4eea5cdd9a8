#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "countbf/hashing.h"

namespace countbf {

// Standard Bloom filter: m bits, k = round((m/n) ln 2) hash functions, bit
// position Hash64(key, seed_i) % m.
class StandardBloomFilter {
 public:
  // Sized by SbfBits/OptimalK; seeds expanded from master_seed.
  StandardBloomFilter(uint64_t n, double epsilon, uint64_t master_seed);
  StandardBloomFilter(uint64_t m_bits, std::vector<HashSeed> seeds);

  void Insert(std::string_view key);
  bool Lookup(std::string_view key) const;

  uint64_t MemoryBits() const { return m_bits_; }
  uint32_t k() const { return static_cast<uint32_t>(seeds_.size()); }
  const std::vector<HashSeed>& seeds() const { return seeds_; }

 private:
  uint64_t m_bits_;
  std::vector<HashSeed> seeds_;
  std::vector<uint64_t> words_;
};

// Conventional counting Bloom filter: m 4-bit counters at the positions the
// standard filter with the same (n, epsilon, seeds) would use. Counters
// saturate at 15 and then stay there; deletes never go below zero.
class CountingBloomFilter {
 public:
  static constexpr unsigned kCounterBits = 4;
  static constexpr unsigned kMaxCount = (1u << kCounterBits) - 1;

  CountingBloomFilter(uint64_t n, double epsilon, uint64_t master_seed);
  CountingBloomFilter(uint64_t counters, std::vector<HashSeed> seeds);

  // Returns the number of saturated counters hit.
  unsigned Insert(std::string_view key);
  bool Lookup(std::string_view key) const;
  // Returns the number of refused (already zero) decrements.
  unsigned Delete(std::string_view key);

  unsigned CounterAt(uint64_t pos) const {
    return (bytes_[pos >> 1] >> ((pos & 1) * 4)) & 0xF;
  }
  uint64_t MemoryBits() const { return counters_ * kCounterBits; }
  uint64_t counters() const { return counters_; }
  uint32_t k() const { return static_cast<uint32_t>(seeds_.size()); }

 private:
  void SetCounter(uint64_t pos, unsigned v) {
    const unsigned shift = (pos & 1) * 4;
    uint8_t& b = bytes_[pos >> 1];
    b = static_cast<uint8_t>((b & ~(0xF << shift)) | (v << shift));
  }

  uint64_t counters_;
  std::vector<HashSeed> seeds_;
  std::vector<uint8_t> bytes_;
};

}  // namespace countbf
