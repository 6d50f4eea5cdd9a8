// countbf: sizing, dataset generation and benchmarks for the countBF filter.
//
//   countbf sizeof --n 10000000 --epsilon 0.001
//   countbf gen    --kinds disjoint --n 100000 --out data/
//   countbf bench  --n 100000 --format json --out report.json
//   countbf freq   --n 10000 --alpha 8
//
// Exit codes: 0 ok, 1 runtime failure, 2 usage, 3 invariant violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <new>
#include <string>

#include <CLI11.hpp>

#include "countbf/bench.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvariant = 3;

void AddCommonFlags(CLI::App* cmd, countbf::RunConfig& c, std::vector<std::string>& kinds,
                    std::string& format) {
  cmd->add_option("--n", c.n, "Inserted items (comma-separated list sweeps)")->delimiter(',');
  cmd->add_option("--epsilon", c.epsilon, "Target false positive rate")->delimiter(',');
  cmd->add_option("--beta", c.beta, "Cell width in bits (32 or 64)");
  cmd->add_option("--seed", c.seed, "Master seed (default 42, or $COUNTBF_SEED)");
  cmd->add_option("--out", c.out, "Output file (bench/freq/sizeof) or directory (gen)");
  cmd->add_option("--kinds", kinds, "same,mixed,disjoint,random")->delimiter(',');
  cmd->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

void Emit(const countbf::RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + c.out);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + c.out);
}

void WarnIfLarge(const countbf::RunConfig& c) {
  for (uint64_t n : c.n) {
    if (n > countbf::kDeskScaleLimit) {
      std::cerr << "warning: n=" << n << " is above desk scale (" << countbf::kDeskScaleLimit
                << "); expect long runtimes and high memory use\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  countbf::RunConfig config;
  if (const char* env = std::getenv("COUNTBF_SEED")) {
    try {
      config.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "COUNTBF_SEED is not an unsigned integer: " << env << "\n";
      return kExitUsage;
    }
  }

  CLI::App app{"countBF sizing, workload generation and benchmarks"};
  app.require_subcommand(1);
  std::vector<std::string> kinds;
  std::string format = "csv";
  uint64_t n_query = 0;

  auto* sizeof_cmd = app.add_subcommand("sizeof", "Print sizing for (n, epsilon) as JSON");
  auto* gen_cmd = app.add_subcommand("gen", "Write workload key files and manifests");
  auto* bench_cmd = app.add_subcommand("bench", "Run the filter x kind x alpha grid");
  auto* freq_cmd = app.add_subcommand("freq", "Frequency-estimation accuracy report");
  for (auto* cmd : {sizeof_cmd, gen_cmd, bench_cmd, freq_cmd}) {
    AddCommonFlags(cmd, config, kinds, format);
  }
  for (auto* cmd : {gen_cmd, bench_cmd}) {
    cmd->add_option("--n-query", n_query, "Queries per workload (default: n)");
  }
  for (auto* cmd : {bench_cmd, freq_cmd}) {
    cmd->add_option("--alpha", config.alphas, "Counter widths, e.g. 3,4,5")->delimiter(',');
  }
  bench_cmd->add_option("--filters", config.filters, "countbf,sbf,cbf")->delimiter(',');
  bench_cmd->add_option("--jobs", config.jobs, "Run grid cells concurrently (drops timings)");
  freq_cmd->add_option("--max-mult", config.max_multiplicity, "Largest key multiplicity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (!kinds.empty()) {
      config.kinds.clear();
      for (const std::string& k : kinds) config.kinds.push_back(countbf::ParseWorkloadKind(k));
    }
    config.format = format == "json" ? countbf::OutputFormat::kJson : countbf::OutputFormat::kCsv;
    for (auto* cmd : {gen_cmd, bench_cmd}) {
      if (cmd->parsed() && cmd->count("--n-query") > 0) config.n_query = n_query;
    }
    countbf::Validate(config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    WarnIfLarge(config);
    if (sizeof_cmd->parsed()) {
      Emit(config, countbf::CmdSizeof(config).dump(2) + "\n");
    } else if (gen_cmd->parsed()) {
      for (const auto& manifest : countbf::CmdGen(config)) std::cout << manifest.string() << "\n";
    } else if (bench_cmd->parsed()) {
      const countbf::BenchResult result = countbf::CmdBench(config);
      Emit(config, countbf::RenderBench(config, result));
      if (result.invariant_violation()) {
        std::cerr << "invariant violation: false negative on a delete-free workload\n";
        return kExitInvariant;
      }
    } else if (freq_cmd->parsed()) {
      const countbf::FreqResult result = countbf::CmdFreq(config);
      Emit(config, countbf::RenderFreq(config, result));
      if (result.invariant_violation()) {
        std::cerr << "invariant violation: unsaturated frequency underestimate\n";
        return kExitInvariant;
      }
    }
  } catch (const countbf::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory; reduce --n\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
