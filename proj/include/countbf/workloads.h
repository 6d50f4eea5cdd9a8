#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace countbf {

enum class WorkloadKind { kSame, kMixed, kDisjoint, kRandom };

// "same", "mixed", "disjoint", "random".
std::string_view ToString(WorkloadKind kind);
// Throws std::invalid_argument for anything else.
WorkloadKind ParseWorkloadKind(std::string_view name);
inline constexpr WorkloadKind kAllKinds[] = {WorkloadKind::kSame, WorkloadKind::kMixed,
                                             WorkloadKind::kDisjoint, WorkloadKind::kRandom};

// Which slice of the 64-bit value space a key stream draws from. Inserted
// keys come from even values and disjoint query keys from odd ones, so the
// two never meet.
enum class KeySpace { kAny, kEven, kOdd };

// n distinct keys: decimal renderings (8..20 chars) of an mt19937_64 stream
// seeded with `seed`. Deterministic per (n, seed, space).
std::vector<std::string> GenKeys(size_t n, uint64_t seed, KeySpace space = KeySpace::kAny);

struct Query {
  std::string key;
  bool present = false;
};

struct QueryWorkload {
  WorkloadKind kind = WorkloadKind::kSame;
  uint64_t seed = 0;
  std::vector<std::string> inserted;
  std::vector<Query> queries;

  size_t absent_queries() const;
};

// Builds one of the four test cases:
//   same      queries are the inserted keys (cycled if n_query > n_insert)
//   mixed     ceil(n_query/2) inserted keys, the rest disjoint, shuffled
//   disjoint  no query was inserted
//   random    uniform keys from the whole space, labeled by membership
QueryWorkload MakeWorkload(WorkloadKind kind, size_t n_insert, size_t n_query, uint64_t seed);

// Exact multiset used as ground truth.
class ExactOracle {
 public:
  void Add(std::string_view key);
  // Removes one copy; returns false if the key was absent.
  bool Remove(std::string_view key);
  bool Contains(std::string_view key) const { return Count(key) > 0; }
  uint64_t Count(std::string_view key) const;
  size_t distinct() const { return counts_.size(); }

 private:
  std::unordered_map<std::string, uint64_t> counts_;
};

struct WorkloadManifest {
  WorkloadKind kind = WorkloadKind::kSame;
  uint64_t seed = 0;
  size_t n_insert = 0;
  size_t n_query = 0;
  std::string insert_file;
  std::string query_file;
  std::string truth_file;
};

// Writes <prefix>_insert.txt, <prefix>_query.txt, <prefix>_truth.txt (one
// line per query, 1 = present, 0 = absent) and <prefix>_manifest.json into
// `dir`. File names in the manifest are relative to the manifest. Returns the
// manifest path.
std::filesystem::path WriteWorkload(const QueryWorkload& w, const std::filesystem::path& dir,
                                    const std::string& prefix);
WorkloadManifest ReadManifest(const std::filesystem::path& manifest_path);
QueryWorkload LoadWorkload(const std::filesystem::path& manifest_path);

}  // namespace countbf
