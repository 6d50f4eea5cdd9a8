#include "countbf/cell_counters.h"

#include <string>

namespace countbf {

namespace {

void Validate(unsigned alpha, unsigned beta) {
  if (beta == 0 || beta > 64) {
    throw std::invalid_argument("cell width must be in [1, 64], got " + std::to_string(beta));
  }
  if (alpha == 0 || alpha > beta) {
    throw std::invalid_argument("counter width must be in [1, " + std::to_string(beta) +
                                "], got " + std::to_string(alpha));
  }
}

uint64_t LowBits(unsigned n) { return n >= 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1; }

}  // namespace

MaskTable::MaskTable(unsigned alpha, unsigned beta) : alpha_(alpha), beta_(beta) {
  Validate(alpha, beta);
  max_value_ = LowBits(alpha);
  const unsigned eta = beta / alpha;
  const uint64_t cell_bits = LowBits(beta);
  extract_.reserve(eta);
  reset_.reserve(eta);
  for (unsigned l = 0; l < eta; ++l) {
    const uint64_t e = max_value_ << (alpha * l);
    extract_.push_back(e);
    reset_.push_back(~e & cell_bits);
  }
}

unsigned CountersPerCell(unsigned alpha, unsigned beta) {
  Validate(alpha, beta);
  return beta / alpha;
}

unsigned Wastage(unsigned alpha, unsigned beta) {
  Validate(alpha, beta);
  return beta % alpha;
}

}  // namespace countbf
