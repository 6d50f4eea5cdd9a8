#include "countbf/baselines.h"

#include <stdexcept>

#include "countbf/sizing.h"

namespace countbf {

StandardBloomFilter::StandardBloomFilter(uint64_t n, double epsilon, uint64_t master_seed)
    : StandardBloomFilter(SbfBits(n, epsilon),
                          ExpandSeeds(master_seed, OptimalK(SbfBits(n, epsilon), n))) {}

StandardBloomFilter::StandardBloomFilter(uint64_t m_bits, std::vector<HashSeed> seeds)
    : m_bits_(m_bits), seeds_(std::move(seeds)), words_((m_bits + 63) / 64, 0) {
  if (m_bits_ == 0) throw std::invalid_argument("SBF needs at least one bit");
  if (seeds_.empty()) throw std::invalid_argument("SBF needs at least one hash function");
}

void StandardBloomFilter::Insert(std::string_view key) {
  for (HashSeed s : seeds_) {
    const uint64_t pos = Hash64(key, s) % m_bits_;
    words_[pos >> 6] |= uint64_t{1} << (pos & 63);
  }
}

bool StandardBloomFilter::Lookup(std::string_view key) const {
  for (HashSeed s : seeds_) {
    const uint64_t pos = Hash64(key, s) % m_bits_;
    if ((words_[pos >> 6] & (uint64_t{1} << (pos & 63))) == 0) return false;
  }
  return true;
}

CountingBloomFilter::CountingBloomFilter(uint64_t n, double epsilon, uint64_t master_seed)
    : CountingBloomFilter(SbfBits(n, epsilon),
                          ExpandSeeds(master_seed, OptimalK(SbfBits(n, epsilon), n))) {}

CountingBloomFilter::CountingBloomFilter(uint64_t counters, std::vector<HashSeed> seeds)
    : counters_(counters), seeds_(std::move(seeds)), bytes_((counters + 1) / 2, 0) {
  if (counters_ == 0) throw std::invalid_argument("CBF needs at least one counter");
  if (seeds_.empty()) throw std::invalid_argument("CBF needs at least one hash function");
}

unsigned CountingBloomFilter::Insert(std::string_view key) {
  unsigned overflows = 0;
  for (HashSeed s : seeds_) {
    const uint64_t pos = Hash64(key, s) % counters_;
    const unsigned c = CounterAt(pos);
    if (c == kMaxCount) {
      ++overflows;
    } else {
      SetCounter(pos, c + 1);
    }
  }
  return overflows;
}

bool CountingBloomFilter::Lookup(std::string_view key) const {
  for (HashSeed s : seeds_) {
    if (CounterAt(Hash64(key, s) % counters_) == 0) return false;
  }
  return true;
}

unsigned CountingBloomFilter::Delete(std::string_view key) {
  unsigned underflows = 0;
  for (HashSeed s : seeds_) {
    const uint64_t pos = Hash64(key, s) % counters_;
    const unsigned c = CounterAt(pos);
    if (c == 0) {
      ++underflows;
    } else if (c != kMaxCount) {
      SetCounter(pos, c - 1);
    }
  }
  return underflows;
}

}  // namespace countbf
