#pragma once

#include <chrono>
#include <concepts>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "countbf/workloads.h"

namespace countbf {

template <typename F>
concept MembershipFilter = requires(F f, const F cf, std::string_view key) {
  f.Insert(key);
  { cf.Lookup(key) } -> std::convertible_to<bool>;
  { cf.MemoryBits() } -> std::convertible_to<uint64_t>;
};

struct BenchReport {
  std::string filter_name;
  WorkloadKind kind = WorkloadKind::kSame;
  unsigned alpha = 0;  // 0 for filters without packed counters
  uint64_t n_insert = 0;
  uint64_t n_query = 0;
  uint64_t false_positives = 0;
  uint64_t false_negatives = 0;
  // FP over truth-absent queries; empty when there are none (same set).
  std::optional<double> measured_fpp;
  double accuracy_pct = 100.0;
  uint64_t memory_bits = 0;
  double bits_per_item = 0.0;
  uint64_t wastage_bits = 0;  // unused bits per cell
  uint64_t insert_ns = 0;
  uint64_t lookup_ns = 0;
};

// memory_bits / n; zero when n == 0.
double BitsPerItem(uint64_t memory_bits, uint64_t n);
// 100 * (1 - (fp + fn) / n_query); 100 when there were no queries.
double AccuracyPct(uint64_t fp, uint64_t fn, uint64_t n_query);

// Inserts w.inserted, answers w.queries and tallies the answers against the
// truth labels. Insert and lookup phases are each timed as one batch.
template <MembershipFilter F>
BenchReport Evaluate(F& filter, const QueryWorkload& w, std::string filter_name,
                     unsigned alpha = 0, uint64_t wastage_bits = 0) {
  using Clock = std::chrono::steady_clock;
  BenchReport r;
  r.filter_name = std::move(filter_name);
  r.kind = w.kind;
  r.alpha = alpha;
  r.n_insert = w.inserted.size();
  r.n_query = w.queries.size();
  r.wastage_bits = wastage_bits;

  const auto t0 = Clock::now();
  for (const std::string& key : w.inserted) filter.Insert(key);
  const auto t1 = Clock::now();

  std::vector<char> answers(w.queries.size());
  for (size_t i = 0; i < w.queries.size(); ++i) answers[i] = filter.Lookup(w.queries[i].key);
  const auto t2 = Clock::now();

  uint64_t absent = 0;
  for (size_t i = 0; i < w.queries.size(); ++i) {
    const bool truth = w.queries[i].present;
    absent += !truth;
    if (answers[i] && !truth) ++r.false_positives;
    if (!answers[i] && truth) ++r.false_negatives;
  }
  if (absent > 0) {
    r.measured_fpp = static_cast<double>(r.false_positives) / static_cast<double>(absent);
  }
  r.accuracy_pct = AccuracyPct(r.false_positives, r.false_negatives, r.n_query);
  r.memory_bits = filter.MemoryBits();
  r.bits_per_item = BitsPerItem(r.memory_bits, r.n_insert);
  r.insert_ns = static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
  r.lookup_ns = static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(t2 - t1).count());
  return r;
}

// filter,kind,alpha,n_insert,n_query,fp,fn,fpp,accuracy_pct,memory_bits,
// bits_per_item,wastage_bits,insert_ns,lookup_ns
std::string_view CsvHeader();
// fpp is empty when undefined. With include_timings == false the two timing
// fields are left empty.
std::string ToCsvRow(const BenchReport& r, bool include_timings = true);
// Same field names as the CSV; fpp is null when undefined.
nlohmann::ordered_json ToJson(const BenchReport& r, bool include_timings = true);

}  // namespace countbf
