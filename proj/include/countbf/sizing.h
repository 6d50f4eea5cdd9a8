#pragma once

#include <cstdint>
#include <vector>

#include "countbf/hashing.h"

namespace countbf {

// Bits a standard Bloom filter needs for n items at false positive rate
// epsilon: ceil(-n ln(epsilon) / ln(2)^2). Throws std::invalid_argument for
// n == 0 or epsilon outside (0, 1).
uint64_t SbfBits(uint64_t n, double epsilon);

// round((m / n) ln 2), at least 1. Halves round up.
uint32_t OptimalK(uint64_t m, uint64_t n);

// Hash count used by countBF: half the optimal count, rounded half-up, at
// least 1.
uint32_t CountbfK(uint64_t m, uint64_t n);
uint32_t HalveK(uint32_t optimal_k);

// Ascending primes <= limit (sieve of Eratosthenes).
std::vector<uint64_t> PrimesUpTo(uint64_t limit);
// Deterministic Miller-Rabin for 64-bit inputs.
bool IsPrime(uint64_t v);

struct Dimensions {
  uint64_t x = 0;  // rows
  uint64_t y = 0;  // columns
  uint64_t cells_target = 0;  // b = ceil(m / (2 beta))
  uint64_t root = 0;          // q = ceil(sqrt(b))
  uint64_t prime_index = 0;   // 1-based index of the smallest prime >= q
  bool used_fallback = false;
};

enum class DimensionPolicy { kAllowFallback, kStrict };

// Grid dimensions for an m-bit budget split in half across beta-bit cells.
// With i the 1-based index of the smallest prime >= q, x = P(i+3) and
// y = P(i-3). When i < 4 the kStrict policy throws std::invalid_argument and
// kAllowFallback picks the two smallest primes >= q (x the larger).
Dimensions ComputeDimensions(uint64_t m, unsigned beta,
                             DimensionPolicy policy = DimensionPolicy::kAllowFallback);

struct FilterPlan {
  uint64_t n = 0;
  double epsilon = 0.0;
  uint64_t m_bits = 0;  // SBF-equivalent budget
  uint32_t k_sbf = 0;
  uint32_t k = 0;  // countBF hash count
  unsigned alpha = 0;
  unsigned beta = 0;
  unsigned eta = 0;
  uint64_t x = 0;
  uint64_t y = 0;
  uint64_t master_seed = 0;
  std::vector<HashSeed> seeds;

  uint64_t memory_bits() const { return x * y * beta; }
  double bits_per_item() const {
    return n == 0 ? 0.0 : static_cast<double>(memory_bits()) / static_cast<double>(n);
  }
};

// Full sizing pipeline for n items at target epsilon with alpha-bit counters
// in beta-bit cells.
FilterPlan MakePlan(uint64_t n, double epsilon, unsigned alpha, unsigned beta,
                    uint64_t master_seed);

// A plan with explicit dimensions, for tests and small hand-built filters.
// Not validated here; the filter constructor does that.
FilterPlan ManualPlan(uint64_t x, uint64_t y, unsigned alpha, unsigned beta, uint32_t k,
                      uint64_t master_seed);

}  // namespace countbf
