#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "countbf/metrics.h"
#include "countbf/workloads.h"

namespace countbf {

// Bad flag values. The CLI maps it to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { kCsv, kJson };

inline constexpr uint64_t kDefaultSeed = 42;
inline constexpr uint64_t kDeskScaleLimit = 10'000'000;

struct RunConfig {
  std::vector<uint64_t> n = {100'000};
  std::optional<uint64_t> n_query;  // defaults to n
  std::vector<double> epsilon = {0.001};
  std::vector<unsigned> alphas = {3, 4, 5, 6, 7, 8};
  unsigned beta = 64;
  std::vector<WorkloadKind> kinds = {std::begin(kAllKinds), std::end(kAllKinds)};
  std::vector<std::string> filters = {"countbf", "sbf", "cbf"};
  uint64_t seed = kDefaultSeed;
  std::string out;  // empty: stdout
  OutputFormat format = OutputFormat::kCsv;
  unsigned jobs = 1;  // > 1 runs grid cells concurrently and drops timings
  uint64_t max_multiplicity = 100;
};

// Throws UsageError describing the first invalid field.
void Validate(const RunConfig& config);
nlohmann::ordered_json ConfigEcho(const RunConfig& config, std::string_view command);

// {n, epsilon, m_bits, k_sbf, k_countbf, x, y, memory_bytes, bits_per_item}
nlohmann::ordered_json SizeofRow(uint64_t n, double epsilon, unsigned beta);
// One row for a single (n, epsilon), an array for a sweep.
nlohmann::ordered_json CmdSizeof(const RunConfig& config);

// Writes one workload per kind into config.out (default "."); returns the
// manifest paths.
std::vector<std::filesystem::path> CmdGen(const RunConfig& config);

struct BenchResult {
  std::vector<BenchReport> reports;
  bool timings = true;
  // Any false negative on these delete-free runs.
  bool invariant_violation() const;
};

// Every (filter x kind x alpha) cell; alpha applies to countbf only.
BenchResult CmdBench(const RunConfig& config);
std::string RenderBench(const RunConfig& config, const BenchResult& result);

struct FreqRow {
  unsigned alpha = 0;
  uint64_t n_keys = 0;
  uint64_t stream_len = 0;
  uint64_t x = 0;
  uint64_t y = 0;
  uint32_t k = 0;
  uint64_t overflow_events = 0;
  uint64_t exact = 0;
  uint64_t over = 0;
  uint64_t under = 0;
  // Estimates pinned at 2^alpha - 1, whose true value may be larger.
  uint64_t saturated = 0;
  // Underestimates whose estimate is below saturation; always zero unless
  // the filter is broken.
  uint64_t unexplained_under = 0;
  double exact_rate() const;
  double overestimate_rate() const;
};

struct FreqResult {
  std::vector<FreqRow> rows;
  // An estimate below the true multiplicity that is not explained by
  // saturation.
  bool invariant_violation() const;
};

// Multiplicity stream: n distinct keys, each repeated a uniform number of
// times in [1, max_multiplicity], shuffled. The filter is sized for the stream
// length. Empty when n == 0.
FreqResult CmdFreq(const RunConfig& config);
std::string RenderFreq(const RunConfig& config, const FreqResult& result);

}  // namespace countbf
