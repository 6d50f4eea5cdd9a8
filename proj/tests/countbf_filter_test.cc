#include "countbf/countbf_filter.h"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include <gtest/gtest.h>

#include "countbf/workloads.h"

namespace countbf {
namespace {

FilterPlan SmallPlan(unsigned alpha = 8, uint32_t k = 5, uint64_t seed = 42) {
  return ManualPlan(101, 103, alpha, 64, k, seed);
}

// Positions of a key computed straight from the hash primitives.
std::vector<CellIndex> Positions(const FilterPlan& p, std::string_view key) {
  std::vector<CellIndex> out;
  for (HashSeed s : p.seeds) out.push_back(DeriveIndices(Hash64(key, s), p.x, p.y, p.eta));
  return out;
}

template <typename Cell>
uint64_t CounterSum(const BasicCountBF<Cell>& f) {
  uint64_t sum = 0;
  for (Cell c : f.cells()) {
    for (unsigned l = 0; l < f.masks().eta(); ++l) sum += ReadCounter(c, l, f.masks());
  }
  return sum;
}

TEST(CountBFTest, EmptyFilter) {
  CountBF f(SmallPlan());
  EXPECT_EQ(f.MemoryBits(), 665'792u);
  EXPECT_EQ(f.Occupancy(), 0.0);
  EXPECT_EQ(f.Stats(), FilterStats{});
  for (const std::string& key : GenKeys(1000, 3)) {
    EXPECT_FALSE(f.Lookup(key));
    EXPECT_EQ(f.Count(key), 0u);
  }
}

TEST(CountBFTest, RejectsInvalidPlans) {
  EXPECT_THROW(CountBF(ManualPlan(101, 101, 8, 64, 5, 1)), std::invalid_argument);
  EXPECT_THROW(CountBF(ManualPlan(100, 103, 8, 64, 5, 1)), std::invalid_argument);
  EXPECT_THROW(CountBF(ManualPlan(101, 103, 8, 64, 0, 1)), std::invalid_argument);
  EXPECT_THROW(CountBF(ManualPlan(101, 103, 8, 32, 5, 1)), std::invalid_argument);
  EXPECT_THROW(CountBF(ManualPlan(101, 103, 0, 64, 5, 1)), std::invalid_argument);
  FilterPlan dup = SmallPlan();
  dup.seeds[1] = dup.seeds[0];
  EXPECT_THROW(CountBF{dup}, std::invalid_argument);
  FilterPlan short_seeds = SmallPlan();
  short_seeds.seeds.pop_back();
  EXPECT_THROW(CountBF{short_seeds}, std::invalid_argument);
}

TEST(CountBFTest, InsertTouchesExactlyKCounters) {
  for (const std::string& key : GenKeys(200, 8)) {
    CountBF f(SmallPlan());
    EXPECT_EQ(f.Insert(key), 0u);
    EXPECT_TRUE(f.Lookup(key));
    EXPECT_EQ(CounterSum(f), f.plan().k);

    const auto pos = Positions(f.plan(), key);
    std::map<std::tuple<uint64_t, uint64_t, uint32_t>, uint64_t> expected;
    for (const CellIndex& p : pos) ++expected[{p.row, p.col, p.counter}];
    for (const auto& [where, n] : expected) {
      const auto [row, col, l] = where;
      EXPECT_EQ(ReadCounter(f.cell(row, col), l, f.masks()), n);
    }
  }
}

TEST(CountBFTest, SaturationIsReported) {
  CountBF f(SmallPlan(3));
  unsigned last = 0;
  for (int i = 0; i < 8; ++i) last = f.Insert("hot-key");
  EXPECT_GE(last, 1u);
  EXPECT_EQ(f.Count("hot-key"), 7u);
  EXPECT_GE(f.Stats().overflow_events, 1u);
  EXPECT_EQ(f.Stats().inserted_ops, 8u);
  // Saturated counters survive deletes, so the key stays visible.
  for (int i = 0; i < 20; ++i) f.Delete("hot-key");
  EXPECT_TRUE(f.Lookup("hot-key"));
}

TEST(CountBFTest, DeleteRoundTrip) {
  CountBF f(SmallPlan());
  f.Insert("k1");
  EXPECT_EQ(f.Delete("k1"), 0u);
  EXPECT_FALSE(f.Lookup("k1"));
  EXPECT_EQ(CounterSum(f), 0u);
}

TEST(CountBFTest, DeleteOnEmptyFilterUnderflowsEverywhere) {
  CountBF f(SmallPlan());
  const std::string before = f.Snapshot();
  EXPECT_EQ(f.Delete("ghost"), f.plan().k);
  EXPECT_EQ(f.Snapshot(), before);
  EXPECT_EQ(f.Stats().underflow_events, f.plan().k);
}

TEST(CountBFTest, PartialDeleteLeavesLiveKeysAndFalsePositiveRateForDeleted) {
  const auto keys = GenKeys(1000, 17, KeySpace::kEven);
  CountBF f(MakePlan(1000, 0.01, 8, 64, 9));
  for (const auto& k : keys) f.Insert(k);
  for (size_t i = 0; i < 500; ++i) EXPECT_EQ(f.Delete(keys[i]), 0u);
  for (size_t i = 500; i < 1000; ++i) EXPECT_TRUE(f.Lookup(keys[i])) << keys[i];

  // Deleted keys now behave like never-inserted ones: their hit rate should
  // agree with the rate on fresh disjoint probes.
  double deleted_hits = 0;
  for (size_t i = 0; i < 500; ++i) deleted_hits += f.Lookup(keys[i]);
  const auto probes = GenKeys(20'000, 18, KeySpace::kOdd);
  double probe_hits = 0;
  for (const auto& k : probes) probe_hits += f.Lookup(k);
  const double p = probe_hits / probes.size();
  const double observed = deleted_hits / 500;
  const double sigma = std::sqrt(p * (1 - p) / 500);
  EXPECT_LE(std::abs(observed - p), 4 * sigma + 0.01) << "p=" << p << " observed=" << observed;
}

TEST(CountBFTest, CountSmallMultiplicity) {
  CountBF f(ManualPlan(1009, 1013, 8, 64, 5, 4));
  EXPECT_EQ(f.Count("never"), 0u);
  for (int i = 0; i < 3; ++i) f.Insert("thrice");
  EXPECT_EQ(f.Count("thrice"), 3u);
  EXPECT_TRUE(f.Lookup("thrice"));
}

TEST(CountBFTest, CountIsOneSidedOnMultiplicityStream) {
  const auto keys = GenKeys(10'000, 23);
  std::mt19937_64 rng(23);
  std::vector<uint64_t> truth(keys.size());
  uint64_t stream = 0;
  for (auto& t : truth) stream += (t = 1 + rng() % 100);
  CountBF f(MakePlan(stream, 0.001, 8, 64, 23));
  for (size_t i = 0; i < keys.size(); ++i) {
    for (uint64_t r = 0; r < truth[i]; ++r) f.Insert(keys[i]);
  }
  size_t exact = 0;
  for (size_t i = 0; i < keys.size(); ++i) {
    const uint64_t est = f.Count(keys[i]);
    ASSERT_GE(est, truth[i]) << keys[i];
    exact += est == truth[i];
  }
  EXPECT_GE(static_cast<double>(exact) / keys.size(), 0.99);
}

TEST(CountBFTest, OccupancyMatchesDistinctPositions) {
  CountBF f(ManualPlan(1009, 1013, 8, 64, 5, 6));
  const auto keys = GenKeys(50, 31);
  std::set<std::tuple<uint64_t, uint64_t, uint32_t>> distinct;
  for (const auto& k : keys) {
    f.Insert(k);
    for (const CellIndex& p : Positions(f.plan(), k)) distinct.insert({p.row, p.col, p.counter});
  }
  const double total = 1009.0 * 1013.0 * 8.0;
  EXPECT_DOUBLE_EQ(f.Occupancy(), static_cast<double>(distinct.size()) / total);
  if (distinct.size() == keys.size() * 5) {
    EXPECT_DOUBLE_EQ(f.Occupancy(), 5.0 * 50 / total);
  }
}

// Random insert/lookup/delete sequences against the exact multiset.
TEST(CountBFTest, RandomOperationSequencesHaveNoFalseNegatives) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 60; ++round) {
    const unsigned alpha = 3 + rng() % 6;
    const uint64_t n = 50 + rng() % 2000;
    CountBF f(MakePlan(n, 0.01, alpha, 64, rng()));
    ExactOracle oracle;
    std::vector<std::string> live;
    const auto pool = GenKeys(n, rng());
    for (int op = 0; op < 3000; ++op) {
      const unsigned action = rng() % 10;
      if (action < 5) {
        const std::string& k = pool[rng() % pool.size()];
        f.Insert(k);
        oracle.Add(k);
        live.push_back(k);
      } else if (action < 7 && !live.empty()) {
        const size_t i = rng() % live.size();
        f.Delete(live[i]);
        oracle.Remove(live[i]);
        live[i] = live.back();
        live.pop_back();
      } else {
        const std::string& k = pool[rng() % pool.size()];
        const uint64_t truth = oracle.Count(k);
        if (truth > 0) ASSERT_TRUE(f.Lookup(k)) << "false negative, round " << round;
        ASSERT_EQ(f.Lookup(k), f.Count(k) >= 1);
        if (f.Stats().overflow_events == 0) ASSERT_GE(f.Count(k), truth);
      }
    }
  }
}

TEST(CountBFTest, SnapshotDeterminismAndRoundTrip) {
  const auto keys = GenKeys(5000, 2);
  CountBF a(MakePlan(5000, 0.01, 5, 64, 3));
  CountBF b(MakePlan(5000, 0.01, 5, 64, 3));
  for (const auto& k : keys) {
    a.Insert(k);
    b.Insert(k);
  }
  EXPECT_EQ(a.Snapshot(), b.Snapshot());

  const CountBF c = CountBF::FromSnapshot(a.Snapshot());
  EXPECT_EQ(c.Snapshot(), a.Snapshot());
  for (const auto& k : keys) EXPECT_TRUE(c.Lookup(k));
}

TEST(CountBFTest, InsertThenDeleteRestoresImage) {
  CountBF f(MakePlan(5000, 0.01, 8, 64, 3));
  for (const auto& k : GenKeys(3000, 4, KeySpace::kEven)) f.Insert(k);
  const std::string before = f.Snapshot();
  for (const auto& k : GenKeys(100, 5, KeySpace::kOdd)) {
    ASSERT_EQ(f.Insert(k), 0u);
    ASSERT_EQ(f.Delete(k), 0u);
    ASSERT_EQ(f.Snapshot(), before);
  }
}

TEST(CountBFTest, SnapshotLayout) {
  CountBF f(SmallPlan());
  f.Insert("x");
  const std::string img = f.Snapshot();
  ASSERT_EQ(img.substr(0, 8), "COUNTBF1");
  auto le64 = [&](size_t off) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(img[off + i]);
    return v;
  };
  EXPECT_EQ(le64(8), 101u);
  EXPECT_EQ(le64(16), 103u);
  EXPECT_EQ(le64(24), 8u);
  EXPECT_EQ(le64(32), 64u);
  EXPECT_EQ(le64(40), 5u);
  EXPECT_EQ(le64(48), f.plan().seeds[0].value);
  EXPECT_EQ(img.size(), 8 + 8 * 5 + 8 * 5 + 101 * 103 * 8u);
  const size_t cells_at = 8 + 8 * 10;
  for (size_t i = 0; i < f.cells().size(); ++i) ASSERT_EQ(le64(cells_at + 8 * i), f.cells()[i]);
}

TEST(CountBFTest, MalformedSnapshotsRejected) {
  CountBF f(SmallPlan());
  const std::string img = f.Snapshot();
  EXPECT_THROW(CountBF::FromSnapshot(""), std::invalid_argument);
  EXPECT_THROW(CountBF::FromSnapshot("COUNTBF2" + img.substr(8)), std::invalid_argument);
  EXPECT_THROW(CountBF::FromSnapshot(img.substr(0, img.size() - 1)), std::invalid_argument);
  EXPECT_THROW(CountBF::FromSnapshot(img.substr(0, 30)), std::invalid_argument);
  EXPECT_THROW(CountBF32::FromSnapshot(img), std::invalid_argument);
}

TEST(CountBF32Test, ThirtyTwoBitCells) {
  CountBF32 f(ManualPlan(101, 103, 5, 32, 4, 8));
  EXPECT_EQ(f.masks().eta(), 6u);
  EXPECT_EQ(f.MemoryBits(), 101u * 103u * 32u);
  const auto keys = GenKeys(500, 10);
  for (const auto& k : keys) f.Insert(k);
  for (const auto& k : keys) EXPECT_TRUE(f.Lookup(k));
  const CountBF32 g = CountBF32::FromSnapshot(f.Snapshot());
  EXPECT_EQ(g.Snapshot(), f.Snapshot());
  EXPECT_EQ(f.Snapshot().size(), 8 + 8 * 5 + 8 * 4 + 101 * 103 * 4u);
  // The two waste bits of every cell stay clear.
  for (uint32_t c : f.cells()) EXPECT_EQ(c >> 30, 0u);
}

}  // namespace
}  // namespace countbf
