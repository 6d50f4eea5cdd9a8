#include "countbf/metrics.h"

#include <fmt/format.h>

namespace countbf {

double BitsPerItem(uint64_t memory_bits, uint64_t n) {
  return n == 0 ? 0.0 : static_cast<double>(memory_bits) / static_cast<double>(n);
}

double AccuracyPct(uint64_t fp, uint64_t fn, uint64_t n_query) {
  if (n_query == 0) return 100.0;
  return 100.0 * (1.0 - static_cast<double>(fp + fn) / static_cast<double>(n_query));
}

std::string_view CsvHeader() {
  return "filter,kind,alpha,n_insert,n_query,fp,fn,fpp,accuracy_pct,memory_bits,"
         "bits_per_item,wastage_bits,insert_ns,lookup_ns";
}

std::string ToCsvRow(const BenchReport& r, bool include_timings) {
  const std::string fpp = r.measured_fpp ? fmt::format("{:.9g}", *r.measured_fpp) : "";
  const std::string insert_ns = include_timings ? std::to_string(r.insert_ns) : "";
  const std::string lookup_ns = include_timings ? std::to_string(r.lookup_ns) : "";
  return fmt::format("{},{},{},{},{},{},{},{},{:.9g},{},{:.12g},{},{},{}", r.filter_name,
                     ToString(r.kind), r.alpha, r.n_insert, r.n_query, r.false_positives,
                     r.false_negatives, fpp, r.accuracy_pct, r.memory_bits, r.bits_per_item,
                     r.wastage_bits, insert_ns, lookup_ns);
}

nlohmann::ordered_json ToJson(const BenchReport& r, bool include_timings) {
  nlohmann::ordered_json j;
  j["filter"] = r.filter_name;
  j["kind"] = ToString(r.kind);
  j["alpha"] = r.alpha;
  j["n_insert"] = r.n_insert;
  j["n_query"] = r.n_query;
  j["fp"] = r.false_positives;
  j["fn"] = r.false_negatives;
  j["fpp"] = r.measured_fpp ? nlohmann::ordered_json(*r.measured_fpp) : nullptr;
  j["accuracy_pct"] = r.accuracy_pct;
  j["memory_bits"] = r.memory_bits;
  j["bits_per_item"] = r.bits_per_item;
  j["wastage_bits"] = r.wastage_bits;
  j["insert_ns"] = include_timings ? nlohmann::ordered_json(r.insert_ns) : nullptr;
  j["lookup_ns"] = include_timings ? nlohmann::ordered_json(r.lookup_ns) : nullptr;
  return j;
}

}  // namespace countbf
