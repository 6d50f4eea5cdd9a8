#include "countbf/sizing.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "countbf/cell_counters.h"

namespace countbf {

namespace {

uint64_t CeilSqrt(uint64_t v) {
  auto r = static_cast<uint64_t>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while (r * r < v) ++r;
  return r;
}

uint64_t MulMod(uint64_t a, uint64_t b, uint64_t mod) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % mod);
}

uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t mod) {
  uint64_t result = 1;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = MulMod(result, base, mod);
    base = MulMod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

}  // namespace

uint64_t SbfBits(uint64_t n, double epsilon) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must be in (0, 1), got " + std::to_string(epsilon));
  }
  const double ln2 = std::numbers::ln2;
  const double m = -static_cast<double>(n) * std::log(epsilon) / (ln2 * ln2);
  return static_cast<uint64_t>(std::ceil(m));
}

uint32_t OptimalK(uint64_t m, uint64_t n) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  const double k = static_cast<double>(m) / static_cast<double>(n) * std::numbers::ln2;
  return std::max<uint32_t>(1, static_cast<uint32_t>(std::floor(k + 0.5)));
}

uint32_t HalveK(uint32_t optimal_k) { return std::max<uint32_t>(1, (optimal_k + 1) / 2); }

uint32_t CountbfK(uint64_t m, uint64_t n) { return HalveK(OptimalK(m, n)); }

std::vector<uint64_t> PrimesUpTo(uint64_t limit) {
  std::vector<uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (uint64_t q = p * p; q <= limit; q += p) composite[q] = true;
  }
  return primes;
}

bool IsPrime(uint64_t v) {
  if (v < 2) return false;
  for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (v % p == 0) return v == p;
  }
  uint64_t d = v - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These witnesses are sufficient for every 64-bit integer.
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = PowMod(a, d, v);
    if (x == 1 || x == v - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = MulMod(x, x, v);
      if (x == v - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Dimensions ComputeDimensions(uint64_t m, unsigned beta, DimensionPolicy policy) {
  if (beta == 0) throw std::invalid_argument("beta must be positive");
  if (m == 0) throw std::invalid_argument("bit budget must be positive");

  Dimensions d;
  d.cells_target = (m + 2ULL * beta - 1) / (2ULL * beta);
  d.root = CeilSqrt(d.cells_target);

  // Grow the sieve until it holds the smallest prime >= q plus three more.
  std::vector<uint64_t> primes;
  size_t pos = 0;
  for (uint64_t limit = std::max<uint64_t>(2 * d.root, 32);; limit *= 2) {
    primes = PrimesUpTo(limit);
    pos = static_cast<size_t>(std::lower_bound(primes.begin(), primes.end(), d.root) -
                              primes.begin());
    if (pos + 3 < primes.size()) break;
  }
  d.prime_index = pos + 1;

  if (d.prime_index >= 4) {
    d.x = primes[pos + 3];
    d.y = primes[pos - 3];
    return d;
  }
  if (policy == DimensionPolicy::kStrict) {
    throw std::invalid_argument("bit budget " + std::to_string(m) +
                                " too small: prime index " + std::to_string(d.prime_index) +
                                " < 4");
  }
  d.used_fallback = true;
  d.x = primes[pos + 1];
  d.y = primes[pos];
  return d;
}

FilterPlan MakePlan(uint64_t n, double epsilon, unsigned alpha, unsigned beta,
                    uint64_t master_seed) {
  FilterPlan plan;
  plan.n = n;
  plan.epsilon = epsilon;
  plan.alpha = alpha;
  plan.beta = beta;
  plan.eta = CountersPerCell(alpha, beta);
  plan.m_bits = SbfBits(n, epsilon);
  plan.k_sbf = OptimalK(plan.m_bits, n);
  plan.k = HalveK(plan.k_sbf);
  const Dimensions d = ComputeDimensions(plan.m_bits, beta);
  plan.x = d.x;
  plan.y = d.y;
  plan.master_seed = master_seed;
  plan.seeds = ExpandSeeds(master_seed, plan.k);
  return plan;
}

FilterPlan ManualPlan(uint64_t x, uint64_t y, unsigned alpha, unsigned beta, uint32_t k,
                      uint64_t master_seed) {
  FilterPlan plan;
  plan.alpha = alpha;
  plan.beta = beta;
  plan.eta = alpha == 0 || alpha > beta ? 0 : beta / alpha;
  plan.k = k;
  plan.x = x;
  plan.y = y;
  plan.master_seed = master_seed;
  plan.seeds = ExpandSeeds(master_seed, k);
  return plan;
}

}  // namespace countbf
