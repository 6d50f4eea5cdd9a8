#include "countbf/bench.h"

#include <algorithm>
#include <functional>
#include <future>
#include <memory>
#include <random>

#include <fmt/format.h>

#include "countbf/baselines.h"
#include "countbf/cell_counters.h"
#include "countbf/countbf_filter.h"
#include "countbf/sizing.h"

namespace countbf {

namespace {

constexpr uint64_t kMultiplicityStream = 0x6d756c74;  // "mult"
constexpr uint64_t kStreamOrder = 0x6f726472;         // "ordr"

uint64_t SubSeed(uint64_t seed, uint64_t stream) {
  uint64_t state = seed ^ stream;
  return SplitMix64(state);
}

bool IsKnownFilter(const std::string& f) { return f == "countbf" || f == "sbf" || f == "cbf"; }

template <typename Cell>
BenchReport RunCountBF(const RunConfig& c, uint64_t n, double eps, unsigned alpha,
                       const QueryWorkload& w) {
  BasicCountBF<Cell> filter(MakePlan(n, eps, alpha, c.beta, c.seed));
  return Evaluate(filter, w, "countbf", alpha, Wastage(alpha, c.beta));
}

template <typename Cell>
FreqRow RunFreq(const RunConfig& c, uint64_t n, double eps, unsigned alpha,
                const std::vector<std::string>& keys, const std::vector<uint64_t>& truth,
                const std::vector<uint32_t>& stream) {
  BasicCountBF<Cell> filter(MakePlan(stream.size(), eps, alpha, c.beta, c.seed));
  for (uint32_t idx : stream) filter.Insert(keys[idx]);

  FreqRow row;
  row.alpha = alpha;
  row.n_keys = n;
  row.stream_len = stream.size();
  row.x = filter.plan().x;
  row.y = filter.plan().y;
  row.k = filter.plan().k;
  row.overflow_events = filter.Stats().overflow_events;
  const uint64_t max_value = filter.masks().max_value();
  for (size_t i = 0; i < keys.size(); ++i) {
    const uint64_t est = filter.Count(keys[i]);
    if (est == truth[i]) {
      ++row.exact;
    } else if (est > truth[i]) {
      ++row.over;
    } else {
      ++row.under;
      if (est != max_value) ++row.unexplained_under;
    }
    if (est == max_value) ++row.saturated;
  }
  return row;
}

}  // namespace

void Validate(const RunConfig& c) {
  if (c.n.empty()) throw UsageError("--n needs at least one value");
  if (c.epsilon.empty()) throw UsageError("--epsilon needs at least one value");
  for (double e : c.epsilon) {
    if (!(e > 0.0 && e < 1.0)) throw UsageError(fmt::format("--epsilon {} not in (0, 1)", e));
  }
  if (c.beta != 32 && c.beta != 64) throw UsageError("--beta must be 32 or 64");
  if (c.alphas.empty()) throw UsageError("--alpha needs at least one value");
  for (unsigned a : c.alphas) {
    if (a == 0 || a > c.beta) {
      throw UsageError(fmt::format("--alpha {} not in [1, {}]", a, c.beta));
    }
  }
  if (c.kinds.empty()) throw UsageError("--kinds needs at least one value");
  if (c.filters.empty()) throw UsageError("--filters needs at least one value");
  for (const std::string& f : c.filters) {
    if (!IsKnownFilter(f)) throw UsageError("unknown filter '" + f + "'");
  }
  if (c.jobs == 0) throw UsageError("--jobs must be positive");
  if (c.max_multiplicity == 0) throw UsageError("--max-mult must be positive");
}

nlohmann::ordered_json ConfigEcho(const RunConfig& c, std::string_view command) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["n"] = c.n;
  j["n_query"] = c.n_query ? nlohmann::ordered_json(*c.n_query) : nullptr;
  j["epsilon"] = c.epsilon;
  j["alpha"] = c.alphas;
  j["beta"] = c.beta;
  std::vector<std::string_view> kinds;
  for (WorkloadKind k : c.kinds) kinds.push_back(ToString(k));
  j["kinds"] = kinds;
  j["filters"] = c.filters;
  j["seed"] = c.seed;
  if (command == "freq") j["max_mult"] = c.max_multiplicity;
  return j;
}

nlohmann::ordered_json SizeofRow(uint64_t n, double epsilon, unsigned beta) {
  const uint64_t m = SbfBits(n, epsilon);
  const Dimensions d = ComputeDimensions(m, beta);
  const uint64_t memory_bits = d.x * d.y * beta;
  nlohmann::ordered_json j;
  j["n"] = n;
  j["epsilon"] = epsilon;
  j["m_bits"] = m;
  j["k_sbf"] = OptimalK(m, n);
  j["k_countbf"] = CountbfK(m, n);
  j["x"] = d.x;
  j["y"] = d.y;
  j["memory_bytes"] = memory_bits / 8;
  j["bits_per_item"] = BitsPerItem(memory_bits, n);
  return j;
}

nlohmann::ordered_json CmdSizeof(const RunConfig& c) {
  Validate(c);
  for (uint64_t n : c.n) {
    if (n == 0) throw UsageError("--n must be positive");
  }
  if (c.n.size() == 1 && c.epsilon.size() == 1) return SizeofRow(c.n[0], c.epsilon[0], c.beta);
  auto rows = nlohmann::ordered_json::array();
  for (uint64_t n : c.n) {
    for (double e : c.epsilon) rows.push_back(SizeofRow(n, e, c.beta));
  }
  return rows;
}

std::vector<std::filesystem::path> CmdGen(const RunConfig& c) {
  Validate(c);
  const std::filesystem::path dir = c.out.empty() ? "." : c.out;
  std::vector<std::filesystem::path> manifests;
  for (uint64_t n : c.n) {
    for (WorkloadKind kind : c.kinds) {
      const QueryWorkload w = MakeWorkload(kind, n, c.n_query.value_or(n), c.seed);
      std::string prefix(ToString(kind));
      if (c.n.size() > 1) prefix += "_" + std::to_string(n);
      manifests.push_back(WriteWorkload(w, dir, prefix));
    }
  }
  return manifests;
}

bool BenchResult::invariant_violation() const {
  return std::any_of(reports.begin(), reports.end(),
                     [](const BenchReport& r) { return r.false_negatives > 0; });
}

BenchResult CmdBench(const RunConfig& c) {
  Validate(c);
  for (uint64_t n : c.n) {
    if (n == 0) throw UsageError("--n must be positive");
  }

  // Grid cells in output order. Each cell owns its filter, so cells are
  // independent and may run concurrently.
  std::vector<std::function<BenchReport()>> cells;
  for (uint64_t n : c.n) {
    for (double eps : c.epsilon) {
      std::vector<std::shared_ptr<const QueryWorkload>> by_kind;
      for (WorkloadKind kind : c.kinds) {
        by_kind.push_back(std::make_shared<const QueryWorkload>(
            MakeWorkload(kind, n, c.n_query.value_or(n), c.seed)));
      }
      for (const std::string& f : c.filters) {
        if (f == "countbf") {
          for (unsigned alpha : c.alphas) {
            for (const auto& w : by_kind) {
              cells.push_back([&c, n, eps, alpha, w] {
                return c.beta == 32 ? RunCountBF<uint32_t>(c, n, eps, alpha, *w)
                                    : RunCountBF<uint64_t>(c, n, eps, alpha, *w);
              });
            }
          }
        } else if (f == "sbf") {
          for (const auto& w : by_kind) {
            cells.push_back([&c, n, eps, w] {
              StandardBloomFilter filter(n, eps, c.seed);
              return Evaluate(filter, *w, "sbf");
            });
          }
        } else {
          for (const auto& w : by_kind) {
            cells.push_back([&c, n, eps, w] {
              CountingBloomFilter filter(n, eps, c.seed);
              return Evaluate(filter, *w, "cbf");
            });
          }
        }
      }
    }
  }

  BenchResult result;
  result.timings = c.jobs == 1;
  result.reports.resize(cells.size());
  if (c.jobs == 1) {
    for (size_t i = 0; i < cells.size(); ++i) result.reports[i] = cells[i]();
    return result;
  }
  for (size_t start = 0; start < cells.size(); start += c.jobs) {
    const size_t end = std::min(cells.size(), start + c.jobs);
    std::vector<std::future<BenchReport>> running;
    for (size_t i = start; i < end; ++i) {
      running.push_back(std::async(std::launch::async, cells[i]));
    }
    for (size_t i = start; i < end; ++i) result.reports[i] = running[i - start].get();
  }
  return result;
}

std::string RenderBench(const RunConfig& c, const BenchResult& result) {
  const auto echo = ConfigEcho(c, "bench");
  if (c.format == OutputFormat::kJson) {
    nlohmann::ordered_json doc;
    doc["config"] = echo;
    doc["reports"] = nlohmann::ordered_json::array();
    for (const BenchReport& r : result.reports) doc["reports"].push_back(ToJson(r, result.timings));
    return doc.dump(2) + "\n";
  }
  std::string out = "# config: " + echo.dump() + "\n";
  out += CsvHeader();
  out += '\n';
  for (const BenchReport& r : result.reports) {
    out += ToCsvRow(r, result.timings);
    out += '\n';
  }
  return out;
}

double FreqRow::exact_rate() const {
  return n_keys == 0 ? 0.0 : static_cast<double>(exact) / static_cast<double>(n_keys);
}

double FreqRow::overestimate_rate() const {
  return n_keys == 0 ? 0.0 : static_cast<double>(over) / static_cast<double>(n_keys);
}

bool FreqResult::invariant_violation() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const FreqRow& r) { return r.unexplained_under > 0; });
}

FreqResult CmdFreq(const RunConfig& c) {
  Validate(c);
  FreqResult result;
  for (uint64_t n : c.n) {
    if (n == 0) continue;
    const std::vector<std::string> keys = GenKeys(n, c.seed);
    std::mt19937_64 rng(SubSeed(c.seed, kMultiplicityStream));
    std::vector<uint64_t> truth(n);
    std::vector<uint32_t> stream;
    for (size_t i = 0; i < n; ++i) {
      truth[i] = rng() % c.max_multiplicity + 1;
      stream.insert(stream.end(), truth[i], static_cast<uint32_t>(i));
    }
    std::mt19937_64 order(SubSeed(c.seed, kStreamOrder));
    for (size_t i = stream.size(); i > 1; --i) std::swap(stream[i - 1], stream[order() % i]);

    for (double eps : c.epsilon) {
      for (unsigned alpha : c.alphas) {
        result.rows.push_back(c.beta == 32 ? RunFreq<uint32_t>(c, n, eps, alpha, keys, truth, stream)
                                           : RunFreq<uint64_t>(c, n, eps, alpha, keys, truth, stream));
      }
    }
  }
  return result;
}

std::string RenderFreq(const RunConfig& c, const FreqResult& result) {
  const auto echo = ConfigEcho(c, "freq");
  if (c.format == OutputFormat::kJson) {
    nlohmann::ordered_json doc;
    doc["config"] = echo;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const FreqRow& r : result.rows) {
      doc["rows"].push_back({{"alpha", r.alpha},
                             {"n_keys", r.n_keys},
                             {"stream_len", r.stream_len},
                             {"x", r.x},
                             {"y", r.y},
                             {"k", r.k},
                             {"overflow_events", r.overflow_events},
                             {"exact", r.exact},
                             {"over", r.over},
                             {"under", r.under},
                             {"saturated", r.saturated},
                             {"exact_rate", r.exact_rate()},
                             {"overestimate_rate", r.overestimate_rate()}});
    }
    return doc.dump(2) + "\n";
  }
  std::string out = "# config: " + echo.dump() + "\n";
  out += "alpha,n_keys,stream_len,x,y,k,overflow_events,exact,over,under,saturated,exact_rate,"
         "overestimate_rate\n";
  for (const FreqRow& r : result.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{:.9g},{:.9g}\n", r.alpha, r.n_keys,
                       r.stream_len, r.x, r.y, r.k, r.overflow_events, r.exact, r.over, r.under,
                       r.saturated, r.exact_rate(), r.overestimate_rate());
  }
  return out;
}

}  // namespace countbf
