#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace countbf {

// Extract and reset masks for alpha-bit counters packed into a beta-bit cell.
//
// Counter l occupies bits [alpha*l, alpha*(l+1)). The top (beta mod alpha)
// bits of a cell are never used. Masks are stored as 64-bit values; for
// beta < 64 only the low beta bits are meaningful and the rest are zero.
class MaskTable {
 public:
  // Throws std::invalid_argument unless 1 <= alpha <= beta <= 64.
  MaskTable(unsigned alpha, unsigned beta);

  unsigned alpha() const { return alpha_; }
  unsigned beta() const { return beta_; }
  unsigned eta() const { return static_cast<unsigned>(extract_.size()); }
  // Largest value a counter can hold: 2^alpha - 1.
  uint64_t max_value() const { return max_value_; }

  uint64_t extract(unsigned l) const { return extract_.at(l); }
  uint64_t reset(unsigned l) const { return reset_.at(l); }
  std::span<const uint64_t> extract_masks() const { return extract_; }
  std::span<const uint64_t> reset_masks() const { return reset_; }

 private:
  unsigned alpha_;
  unsigned beta_;
  uint64_t max_value_;
  std::vector<uint64_t> extract_;
  std::vector<uint64_t> reset_;
};

inline MaskTable BuildMasks(unsigned alpha, unsigned beta) {
  return MaskTable(alpha, beta);
}

// floor(beta / alpha); throws like BuildMasks.
unsigned CountersPerCell(unsigned alpha, unsigned beta);
// beta mod alpha: bits per cell that hold no counter.
unsigned Wastage(unsigned alpha, unsigned beta);

template <std::unsigned_integral Cell>
struct CounterUpdate {
  Cell cell;
  // Overflow for an increment, underflow for a decrement.
  bool flagged;
};

namespace detail {

template <std::unsigned_integral Cell>
inline uint64_t ReadUnchecked(Cell cell, unsigned l, const MaskTable& t) {
  return (static_cast<uint64_t>(cell) & t.extract_masks()[l]) >> (t.alpha() * l);
}

template <std::unsigned_integral Cell>
inline Cell WriteUnchecked(Cell cell, unsigned l, uint64_t value, const MaskTable& t) {
  const uint64_t shifted = value << (t.alpha() * l);
  return static_cast<Cell>((static_cast<uint64_t>(cell) & t.reset_masks()[l]) | shifted);
}

template <std::unsigned_integral Cell>
inline CounterUpdate<Cell> IncrementUnchecked(Cell cell, unsigned l, const MaskTable& t) {
  const uint64_t c = ReadUnchecked(cell, l, t);
  if (c == t.max_value()) return {cell, true};
  return {WriteUnchecked(cell, l, c + 1, t), false};
}

template <std::unsigned_integral Cell>
inline CounterUpdate<Cell> DecrementUnchecked(Cell cell, unsigned l, const MaskTable& t) {
  const uint64_t c = ReadUnchecked(cell, l, t);
  if (c == 0) return {cell, true};
  // Saturated counters are sticky: the true multiplicity is unknown, so
  // lowering it could produce a false negative.
  if (c == t.max_value()) return {cell, false};
  return {WriteUnchecked(cell, l, c - 1, t), false};
}

template <std::unsigned_integral Cell>
inline void CheckCell(unsigned l, const MaskTable& t) {
  if (t.beta() != static_cast<unsigned>(std::numeric_limits<Cell>::digits)) {
    throw std::invalid_argument("cell word width does not match mask table beta");
  }
  if (l >= t.eta()) throw std::out_of_range("counter index out of range");
}

}  // namespace detail

template <std::unsigned_integral Cell>
uint64_t ReadCounter(Cell cell, unsigned l, const MaskTable& t) {
  detail::CheckCell<Cell>(l, t);
  return detail::ReadUnchecked(cell, l, t);
}

// Replaces counter l with `value`; other counters are untouched. Throws
// std::invalid_argument if value > max_value().
template <std::unsigned_integral Cell>
Cell WriteCounter(Cell cell, unsigned l, uint64_t value, const MaskTable& t) {
  detail::CheckCell<Cell>(l, t);
  if (value > t.max_value()) throw std::invalid_argument("counter value exceeds 2^alpha - 1");
  return detail::WriteUnchecked(cell, l, value, t);
}

// +1 unless the counter is already at max_value(), in which case the cell is
// returned unchanged with the overflow flag set.
template <std::unsigned_integral Cell>
CounterUpdate<Cell> SaturatingIncrement(Cell cell, unsigned l, const MaskTable& t) {
  detail::CheckCell<Cell>(l, t);
  return detail::IncrementUnchecked(cell, l, t);
}

// -1 for counters in [1, max); zero sets the underflow flag; saturated
// counters stay put without a flag.
template <std::unsigned_integral Cell>
CounterUpdate<Cell> GuardedDecrement(Cell cell, unsigned l, const MaskTable& t) {
  detail::CheckCell<Cell>(l, t);
  return detail::DecrementUnchecked(cell, l, t);
}

}  // namespace countbf
