#include "countbf/countbf_filter.h"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace countbf {

namespace {

constexpr std::string_view kMagic = "COUNTBF1";

void PutLE(std::string& out, uint64_t v, unsigned bytes) {
  for (unsigned i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  uint64_t Get(unsigned bytes) {
    if (data_.size() - pos_ < bytes) throw std::invalid_argument("snapshot truncated");
    uint64_t v = 0;
    for (unsigned i = 0; i < bytes; ++i) {
      v |= uint64_t{static_cast<unsigned char>(data_[pos_ + i])} << (8 * i);
    }
    pos_ += bytes;
    return v;
  }
  size_t remaining() const { return data_.size() - pos_; }

 private:
  std::string_view data_;
  size_t pos_ = 0;
};

const FilterPlan& Validated(const FilterPlan& plan, unsigned cell_bits) {
  if (plan.beta != cell_bits) {
    throw std::invalid_argument("plan beta " + std::to_string(plan.beta) +
                                " does not match cell width " + std::to_string(cell_bits));
  }
  if (plan.x == plan.y) throw std::invalid_argument("dimensions must differ (x == y)");
  if (!IsPrime(plan.x) || !IsPrime(plan.y)) {
    throw std::invalid_argument("dimensions must be prime");
  }
  if (plan.k == 0) throw std::invalid_argument("hash count must be at least 1");
  if (plan.seeds.size() != plan.k) throw std::invalid_argument("seed list length != k");
  for (size_t i = 0; i < plan.seeds.size(); ++i) {
    for (size_t j = i + 1; j < plan.seeds.size(); ++j) {
      if (plan.seeds[i] == plan.seeds[j]) throw std::invalid_argument("seeds must be distinct");
    }
  }
  return plan;
}

}  // namespace

template <typename Cell>
BasicCountBF<Cell>::BasicCountBF(FilterPlan plan)
    : plan_(Validated(plan, kCellBits)),
      masks_(plan_.alpha, plan_.beta),
      cells_(plan_.x * plan_.y, Cell{0}) {
  plan_.eta = masks_.eta();
}

template <typename Cell>
unsigned BasicCountBF<Cell>::Insert(std::string_view key) {
  unsigned overflows = 0;
  for (size_t s = 0; s < plan_.k; ++s) {
    const CellIndex idx = Locate(key, s);
    Cell& c = At(idx);
    const auto r = detail::IncrementUnchecked(c, idx.counter, masks_);
    c = r.cell;
    overflows += r.flagged;
  }
  ++stats_.inserted_ops;
  stats_.overflow_events += overflows;
  return overflows;
}

template <typename Cell>
bool BasicCountBF<Cell>::Lookup(std::string_view key) const {
  for (size_t s = 0; s < plan_.k; ++s) {
    const CellIndex idx = Locate(key, s);
    if (detail::ReadUnchecked(At(idx), idx.counter, masks_) == 0) return false;
  }
  return true;
}

template <typename Cell>
unsigned BasicCountBF<Cell>::Delete(std::string_view key) {
  unsigned underflows = 0;
  for (size_t s = 0; s < plan_.k; ++s) {
    const CellIndex idx = Locate(key, s);
    Cell& c = At(idx);
    const auto r = detail::DecrementUnchecked(c, idx.counter, masks_);
    c = r.cell;
    underflows += r.flagged;
  }
  stats_.underflow_events += underflows;
  return underflows;
}

template <typename Cell>
uint64_t BasicCountBF<Cell>::Count(std::string_view key) const {
  uint64_t best = masks_.max_value();
  for (size_t s = 0; s < plan_.k; ++s) {
    const CellIndex idx = Locate(key, s);
    best = std::min(best, detail::ReadUnchecked(At(idx), idx.counter, masks_));
    if (best == 0) break;
  }
  return best;
}

template <typename Cell>
double BasicCountBF<Cell>::Occupancy() const {
  uint64_t nonzero = 0;
  const unsigned eta = masks_.eta();
  for (Cell c : cells_) {
    if (c == 0) continue;
    for (unsigned l = 0; l < eta; ++l) nonzero += detail::ReadUnchecked(c, l, masks_) != 0;
  }
  return static_cast<double>(nonzero) / static_cast<double>(cells_.size() * eta);
}

template <typename Cell>
std::string BasicCountBF<Cell>::Snapshot() const {
  std::string out;
  out.reserve(kMagic.size() + 8 * (5 + plan_.k) + cells_.size() * sizeof(Cell));
  out.append(kMagic);
  PutLE(out, plan_.x, 8);
  PutLE(out, plan_.y, 8);
  PutLE(out, plan_.alpha, 8);
  PutLE(out, plan_.beta, 8);
  PutLE(out, plan_.k, 8);
  for (HashSeed s : plan_.seeds) PutLE(out, s.value, 8);
  for (Cell c : cells_) PutLE(out, c, sizeof(Cell));
  return out;
}

template <typename Cell>
BasicCountBF<Cell> BasicCountBF<Cell>::FromSnapshot(std::string_view image) {
  if (image.substr(0, kMagic.size()) != kMagic) {
    throw std::invalid_argument("snapshot: bad magic");
  }
  Reader in(image.substr(kMagic.size()));
  const uint64_t x = in.Get(8);
  const uint64_t y = in.Get(8);
  const uint64_t alpha = in.Get(8);
  const uint64_t beta = in.Get(8);
  const uint64_t k = in.Get(8);
  if (alpha == 0 || alpha > 64 || beta > 64 || k > in.remaining() / 8) {
    throw std::invalid_argument("snapshot: bad header");
  }
  FilterPlan plan;
  plan.x = x;
  plan.y = y;
  plan.alpha = static_cast<unsigned>(alpha);
  plan.beta = static_cast<unsigned>(beta);
  plan.k = static_cast<uint32_t>(k);
  for (uint64_t i = 0; i < k; ++i) plan.seeds.push_back(HashSeed{in.Get(8)});
  if (x == 0 || y == 0 || in.remaining() % sizeof(Cell) != 0 ||
      in.remaining() / sizeof(Cell) / x != y || in.remaining() / sizeof(Cell) % x != 0) {
    throw std::invalid_argument("snapshot: cell payload size mismatch");
  }

  BasicCountBF filter(std::move(plan));
  for (Cell& c : filter.cells_) c = static_cast<Cell>(in.Get(sizeof(Cell)));
  return filter;
}

template class BasicCountBF<uint32_t>;
template class BasicCountBF<uint64_t>;

}  // namespace countbf
