#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "countbf/cell_counters.h"
#include "countbf/hashing.h"
#include "countbf/sizing.h"

namespace countbf {

struct FilterStats {
  uint64_t inserted_ops = 0;
  uint64_t overflow_events = 0;
  uint64_t underflow_events = 0;

  friend bool operator==(const FilterStats&, const FilterStats&) = default;
};

// Counting Bloom filter over an x-by-y grid of machine words, each word
// packing eta = beta / alpha counters of alpha bits.
//
// Every operation hashes the key once per seed and maps each hash h to row
// h % x, column h % y and counter h % eta of that cell. Positions of one key
// may coincide; increments then stack on the same counter.
//
// Counters saturate at 2^alpha - 1 and stay there. Delete is not
// transactional: if some of the k counters are already zero, the others are
// still decremented and the refusals are reported through the return value.
//
// Thread safety: single writer. Concurrent Lookup/Count calls are fine when
// no Insert/Delete runs at the same time.
template <typename Cell>
class BasicCountBF {
 public:
  static constexpr unsigned kCellBits = std::numeric_limits<Cell>::digits;

  // Throws std::invalid_argument if x == y, either dimension is not prime,
  // k == 0, the seed list does not match k, or plan.beta != kCellBits.
  explicit BasicCountBF(FilterPlan plan);

  // Returns how many of the k increments hit a saturated counter.
  unsigned Insert(std::string_view key);
  bool Lookup(std::string_view key) const;
  // Returns how many of the k decrements found a zero counter.
  unsigned Delete(std::string_view key);
  // Minimum of the k counters: never below the true multiplicity while no
  // counter saturates, and zero only for keys never inserted.
  uint64_t Count(std::string_view key) const;

  uint64_t MemoryBits() const { return plan_.x * plan_.y * kCellBits; }
  // Fraction of all x*y*eta counters that are non-zero (full scan).
  double Occupancy() const;
  FilterStats Stats() const { return stats_; }

  const FilterPlan& plan() const { return plan_; }
  const MaskTable& masks() const { return masks_; }
  std::span<const Cell> cells() const { return cells_; }
  Cell cell(uint64_t row, uint64_t col) const { return cells_.at(row * plan_.y + col); }

  // "COUNTBF1", then x, y, alpha, beta, k and the k seeds as little-endian
  // u64, then the x*y cells row-major as little-endian beta-bit words.
  std::string Snapshot() const;
  // Inverse of Snapshot (statistics are not part of the image and start at
  // zero). Throws std::invalid_argument on malformed input.
  static BasicCountBF FromSnapshot(std::string_view image);

 private:
  CellIndex Locate(std::string_view key, size_t seed_index) const {
    const uint64_t h = Hash64(key, plan_.seeds[seed_index]);
    return CellIndex{h % plan_.x, h % plan_.y, static_cast<uint32_t>(h % plan_.eta)};
  }
  Cell& At(const CellIndex& idx) { return cells_[idx.row * plan_.y + idx.col]; }
  Cell At(const CellIndex& idx) const { return cells_[idx.row * plan_.y + idx.col]; }

  FilterPlan plan_;
  MaskTable masks_;
  std::vector<Cell> cells_;
  FilterStats stats_;
};

using CountBF = BasicCountBF<uint64_t>;
using CountBF32 = BasicCountBF<uint32_t>;

extern template class BasicCountBF<uint32_t>;
extern template class BasicCountBF<uint64_t>;

}  // namespace countbf
