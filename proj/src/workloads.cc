#include "countbf/workloads.h"

#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "countbf/hashing.h"

namespace countbf {

namespace {

constexpr uint64_t kMinKeyValue = 10'000'000;  // 8 decimal digits

// Stream selectors mixed into the workload seed.
constexpr uint64_t kInsertStream = 0x1;
constexpr uint64_t kDisjointStream = 0x2;
constexpr uint64_t kRandomStream = 0x3;
constexpr uint64_t kPickStream = 0x4;

uint64_t SubSeed(uint64_t seed, uint64_t stream) {
  uint64_t state = seed ^ (stream * 0xd1b54a32d192ed03ULL);
  return SplitMix64(state);
}

// Fisher-Yates with an explicit bounded draw so the order is the same under
// every standard library.
template <typename T>
void Shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  return lines;
}

void WriteLines(const std::filesystem::path& path, const auto& items, auto&& render) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& item : items) out << render(item) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string_view ToString(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kSame: return "same";
    case WorkloadKind::kMixed: return "mixed";
    case WorkloadKind::kDisjoint: return "disjoint";
    case WorkloadKind::kRandom: return "random";
  }
  return "?";
}

WorkloadKind ParseWorkloadKind(std::string_view name) {
  for (WorkloadKind k : kAllKinds) {
    if (ToString(k) == name) return k;
  }
  throw std::invalid_argument("unknown workload kind '" + std::string(name) + "'");
}

std::vector<std::string> GenKeys(size_t n, uint64_t seed, KeySpace space) {
  std::mt19937_64 rng(seed);
  std::unordered_set<uint64_t> seen;
  seen.reserve(n);
  std::vector<std::string> keys;
  keys.reserve(n);
  while (keys.size() < n) {
    uint64_t v = rng();
    if (space == KeySpace::kEven) v &= ~uint64_t{1};
    if (space == KeySpace::kOdd) v |= 1;
    // Adding an even offset keeps the parity partition intact.
    if (v < kMinKeyValue) v += kMinKeyValue;
    if (seen.insert(v).second) keys.push_back(std::to_string(v));
  }
  return keys;
}

size_t QueryWorkload::absent_queries() const {
  size_t absent = 0;
  for (const Query& q : queries) absent += !q.present;
  return absent;
}

QueryWorkload MakeWorkload(WorkloadKind kind, size_t n_insert, size_t n_query, uint64_t seed) {
  QueryWorkload w;
  w.kind = kind;
  w.seed = seed;
  w.inserted = GenKeys(n_insert, SubSeed(seed, kInsertStream), KeySpace::kEven);
  w.queries.reserve(n_query);

  switch (kind) {
    case WorkloadKind::kSame:
      if (n_insert == 0 && n_query > 0) {
        throw std::invalid_argument("same-set workload needs inserted keys");
      }
      for (size_t i = 0; i < n_query; ++i) w.queries.push_back({w.inserted[i % n_insert], true});
      break;

    case WorkloadKind::kMixed: {
      const size_t present = (n_query + 1) / 2;
      if (n_insert == 0 && present > 0) {
        throw std::invalid_argument("mixed-set workload needs inserted keys");
      }
      std::mt19937_64 rng(SubSeed(seed, kPickStream));
      std::vector<size_t> order(n_insert);
      for (size_t i = 0; i < n_insert; ++i) order[i] = i;
      Shuffle(order, rng);
      for (size_t i = 0; i < present; ++i) {
        w.queries.push_back({w.inserted[order[i % n_insert]], true});
      }
      for (std::string& key :
           GenKeys(n_query - present, SubSeed(seed, kDisjointStream), KeySpace::kOdd)) {
        w.queries.push_back({std::move(key), false});
      }
      Shuffle(w.queries, rng);
      break;
    }

    case WorkloadKind::kDisjoint:
      for (std::string& key : GenKeys(n_query, SubSeed(seed, kDisjointStream), KeySpace::kOdd)) {
        w.queries.push_back({std::move(key), false});
      }
      break;

    case WorkloadKind::kRandom: {
      const std::unordered_set<std::string_view> members(w.inserted.begin(), w.inserted.end());
      for (std::string& key : GenKeys(n_query, SubSeed(seed, kRandomStream), KeySpace::kAny)) {
        const bool present = members.contains(key);
        w.queries.push_back({std::move(key), present});
      }
      break;
    }
  }
  return w;
}

void ExactOracle::Add(std::string_view key) { ++counts_[std::string(key)]; }

bool ExactOracle::Remove(std::string_view key) {
  auto it = counts_.find(std::string(key));
  if (it == counts_.end()) return false;
  if (--it->second == 0) counts_.erase(it);
  return true;
}

uint64_t ExactOracle::Count(std::string_view key) const {
  auto it = counts_.find(std::string(key));
  return it == counts_.end() ? 0 : it->second;
}

std::filesystem::path WriteWorkload(const QueryWorkload& w, const std::filesystem::path& dir,
                                    const std::string& prefix) {
  std::filesystem::create_directories(dir);
  const std::string insert_file = prefix + "_insert.txt";
  const std::string query_file = prefix + "_query.txt";
  const std::string truth_file = prefix + "_truth.txt";

  WriteLines(dir / insert_file, w.inserted, [](const std::string& k) -> const std::string& {
    return k;
  });
  WriteLines(dir / query_file, w.queries, [](const Query& q) -> const std::string& {
    return q.key;
  });
  WriteLines(dir / truth_file, w.queries, [](const Query& q) { return q.present ? '1' : '0'; });

  nlohmann::ordered_json manifest = {
      {"kind", ToString(w.kind)},       {"seed", w.seed},
      {"n_insert", w.inserted.size()},  {"n_query", w.queries.size()},
      {"insert_file", insert_file},     {"query_file", query_file},
      {"truth_file", truth_file},
  };
  const auto manifest_path = dir / (prefix + "_manifest.json");
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + manifest_path.string());
  out << manifest.dump(2) << '\n';
  return manifest_path;
}

WorkloadManifest ReadManifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open " + manifest_path.string());
  const auto j = nlohmann::json::parse(in);
  WorkloadManifest m;
  m.kind = ParseWorkloadKind(j.at("kind").get<std::string>());
  m.seed = j.at("seed").get<uint64_t>();
  m.n_insert = j.at("n_insert").get<size_t>();
  m.n_query = j.at("n_query").get<size_t>();
  m.insert_file = j.at("insert_file").get<std::string>();
  m.query_file = j.at("query_file").get<std::string>();
  m.truth_file = j.at("truth_file").get<std::string>();
  return m;
}

QueryWorkload LoadWorkload(const std::filesystem::path& manifest_path) {
  const WorkloadManifest m = ReadManifest(manifest_path);
  const auto dir = manifest_path.parent_path();
  QueryWorkload w;
  w.kind = m.kind;
  w.seed = m.seed;
  w.inserted = ReadLines(dir / m.insert_file);
  const auto keys = ReadLines(dir / m.query_file);
  const auto truth = ReadLines(dir / m.truth_file);
  if (w.inserted.size() != m.n_insert || keys.size() != m.n_query ||
      truth.size() != m.n_query) {
    throw std::runtime_error("workload files disagree with manifest sizes");
  }
  w.queries.reserve(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) {
    if (truth[i] != "0" && truth[i] != "1") {
      throw std::runtime_error("bad truth label on line " + std::to_string(i + 1));
    }
    w.queries.push_back({keys[i], truth[i] == "1"});
  }
  return w;
}

}  // namespace countbf
