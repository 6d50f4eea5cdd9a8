#include "countbf/cell_counters.h"

#include <random>

#include <gtest/gtest.h>

namespace countbf {
namespace {

uint64_t UsedBits(const MaskTable& t) {
  uint64_t used = 0;
  for (uint64_t e : t.extract_masks()) used |= e;
  return used;
}

TEST(MaskTableTest, SevenBitCountersMatchPublishedMasks) {
  const MaskTable t = BuildMasks(7, 64);
  EXPECT_EQ(t.eta(), 9u);
  EXPECT_EQ(t.extract(2), 0x00000000001FC000ULL);
  EXPECT_EQ(t.reset(2), 0xFFFFFFFFFFE03FFFULL);
}

TEST(MaskTableTest, WholeCellCounter) {
  const MaskTable t = BuildMasks(64, 64);
  EXPECT_EQ(t.eta(), 1u);
  EXPECT_EQ(t.extract(0), ~uint64_t{0});
  EXPECT_EQ(t.reset(0), 0u);
  EXPECT_EQ(t.max_value(), ~uint64_t{0});
}

TEST(MaskTableTest, RejectsBadWidths) {
  EXPECT_THROW(BuildMasks(0, 64), std::invalid_argument);
  EXPECT_THROW(BuildMasks(65, 64), std::invalid_argument);
  EXPECT_THROW(BuildMasks(33, 32), std::invalid_argument);
  EXPECT_THROW(CountersPerCell(0, 64), std::invalid_argument);
  EXPECT_THROW(Wastage(9, 8), std::invalid_argument);
}

// Every (alpha, beta): masks are disjoint, complementary within beta bits and
// together cover exactly the low eta*alpha bits.
TEST(MaskTableTest, MaskAlgebraForAllWidths) {
  for (unsigned beta : {32u, 64u}) {
    const uint64_t cell_bits = beta == 64 ? ~uint64_t{0} : (uint64_t{1} << beta) - 1;
    for (unsigned alpha = 1; alpha <= beta; ++alpha) {
      const MaskTable t(alpha, beta);
      ASSERT_EQ(t.eta(), beta / alpha);
      const unsigned used = t.eta() * alpha;
      const uint64_t used_bits = used == 64 ? ~uint64_t{0} : (uint64_t{1} << used) - 1;
      uint64_t seen = 0;
      for (unsigned l = 0; l < t.eta(); ++l) {
        const uint64_t e = t.extract(l);
        ASSERT_EQ(e, t.max_value() << (alpha * l));
        ASSERT_EQ(e & t.reset(l), 0u) << alpha << "/" << beta << " l=" << l;
        ASSERT_EQ(e ^ t.reset(l), cell_bits);
        ASSERT_EQ(seen & e, 0u);
        seen |= e;
      }
      EXPECT_EQ(seen, used_bits) << alpha << "/" << beta;
    }
  }
}

TEST(CounterGeometryTest, CountersPerCell) {
  const unsigned expected[] = {21, 16, 12, 10, 9, 8};
  for (unsigned alpha = 3; alpha <= 8; ++alpha) {
    EXPECT_EQ(CountersPerCell(alpha, 64), expected[alpha - 3]) << alpha;
  }
  EXPECT_EQ(CountersPerCell(64, 64), 1u);
  EXPECT_EQ(CountersPerCell(5, 32), 6u);
}

TEST(CounterGeometryTest, Wastage) {
  const unsigned expected[] = {1, 0, 4, 4, 1, 0};
  for (unsigned alpha = 3; alpha <= 8; ++alpha) {
    EXPECT_EQ(Wastage(alpha, 64), expected[alpha - 3]) << alpha;
  }
  EXPECT_EQ(Wastage(64, 64), 0u);
  EXPECT_EQ(Wastage(7, 32), 4u);
}

TEST(CounterAccessTest, ReadExamples) {
  const MaskTable t(8, 64);
  for (unsigned l = 0; l < t.eta(); ++l) EXPECT_EQ(ReadCounter(uint64_t{0}, l, t), 0u);
  EXPECT_EQ(ReadCounter(uint64_t{0x500}, 1, t), 5u);
  EXPECT_THROW(ReadCounter(uint64_t{0}, 8, t), std::out_of_range);
}

TEST(CounterAccessTest, WriteExamples) {
  EXPECT_EQ(WriteCounter(uint64_t{0}, 0, 1, MaskTable(8, 64)), 1u);
  const MaskTable t7(7, 64);
  EXPECT_EQ(WriteCounter(uint64_t{0}, 2, 0x7F, t7), 0x00000000001FC000ULL);
  EXPECT_THROW(WriteCounter(uint64_t{0}, 2, 0x80, t7), std::invalid_argument);
  EXPECT_THROW(WriteCounter(uint64_t{0}, 9, 1, t7), std::out_of_range);
}

TEST(CounterAccessTest, CellWidthMustMatchTable) {
  const MaskTable t(8, 64);
  EXPECT_THROW(ReadCounter(uint32_t{0}, 0, t), std::invalid_argument);
  const MaskTable t32(8, 32);
  EXPECT_EQ(t32.eta(), 4u);
  EXPECT_EQ(WriteCounter(uint32_t{0}, 3, 0xAB, t32), 0xAB000000u);
}

TEST(CounterAccessTest, ExhaustiveRoundTripSmallWidths) {
  std::mt19937_64 rng(1);
  for (unsigned alpha = 1; alpha <= 8; ++alpha) {
    const MaskTable t(alpha, 64);
    const uint64_t cell = rng() & UsedBits(t);
    for (unsigned l = 0; l < t.eta(); ++l) {
      for (uint64_t v = 0; v <= t.max_value(); ++v) {
        ASSERT_EQ(ReadCounter(WriteCounter(cell, l, v, t), l, t), v);
      }
    }
  }
}

TEST(CounterAccessTest, RandomRoundTripAndIsolation) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100'000; ++i) {
    const unsigned alpha = 1 + rng() % 64;
    const MaskTable t(alpha, 64);
    uint64_t cell = 0;
    for (unsigned l = 0; l < t.eta(); ++l) cell = WriteCounter(cell, l, rng() & t.max_value(), t);
    const unsigned l = rng() % t.eta();
    const uint64_t v = rng() & t.max_value();
    const uint64_t updated = WriteCounter(cell, l, v, t);
    ASSERT_EQ(ReadCounter(updated, l, t), v);
    // Nothing outside the counter's own mask moved.
    ASSERT_EQ(updated & t.reset(l), cell & t.reset(l));
    for (unsigned o = 0; o < t.eta(); ++o) {
      if (o != l) ASSERT_EQ(ReadCounter(updated, o, t), ReadCounter(cell, o, t));
    }
  }
}

TEST(SaturatingIncrementTest, Basics) {
  const MaskTable t(3, 64);
  auto r = SaturatingIncrement(uint64_t{0}, 0, t);
  EXPECT_EQ(ReadCounter(r.cell, 0, t), 1u);
  EXPECT_FALSE(r.flagged);

  const uint64_t full = WriteCounter(uint64_t{0}, 4, 7, t);
  r = SaturatingIncrement(full, 4, t);
  EXPECT_EQ(r.cell, full);
  EXPECT_TRUE(r.flagged);
}

TEST(SaturatingIncrementTest, LoopToSaturation) {
  for (unsigned alpha = 1; alpha <= 8; ++alpha) {
    const MaskTable t(alpha, 64);
    uint64_t cell = 0;
    int flags = 0;
    for (uint64_t i = 0; i < (uint64_t{1} << alpha); ++i) {
      const auto r = SaturatingIncrement(cell, t.eta() - 1, t);
      cell = r.cell;
      flags += r.flagged;
    }
    EXPECT_EQ(ReadCounter(cell, t.eta() - 1, t), t.max_value());
    EXPECT_EQ(flags, 1) << alpha;
    // Waste bits above the last counter stay clear.
    EXPECT_EQ(cell & ~UsedBits(t), 0u);
  }
}

TEST(GuardedDecrementTest, Basics) {
  const MaskTable t(4, 64);
  auto r = GuardedDecrement(WriteCounter(uint64_t{0}, 2, 1, t), 2, t);
  EXPECT_EQ(r.cell, 0u);
  EXPECT_FALSE(r.flagged);

  r = GuardedDecrement(uint64_t{0}, 2, t);
  EXPECT_EQ(r.cell, 0u);
  EXPECT_TRUE(r.flagged);

  // Saturated counters are sticky and not reported as underflow.
  const uint64_t sat = WriteCounter(uint64_t{0}, 2, 15, t);
  r = GuardedDecrement(sat, 2, t);
  EXPECT_EQ(r.cell, sat);
  EXPECT_FALSE(r.flagged);
}

TEST(GuardedDecrementTest, IncrementDecrementRoundTrip) {
  std::mt19937_64 rng(3);
  for (unsigned alpha = 2; alpha <= 8; ++alpha) {
    const MaskTable t(alpha, 64);
    for (int trial = 0; trial < 50; ++trial) {
      const unsigned l = rng() % t.eta();
      const uint64_t n = rng() % t.max_value();  // n < MAX
      uint64_t cell = 0;
      for (uint64_t i = 0; i < n; ++i) {
        const auto r = SaturatingIncrement(cell, l, t);
        ASSERT_FALSE(r.flagged);
        cell = r.cell;
      }
      for (uint64_t i = 0; i < n; ++i) {
        const auto r = GuardedDecrement(cell, l, t);
        ASSERT_FALSE(r.flagged);
        cell = r.cell;
      }
      EXPECT_EQ(cell, 0u);
    }
  }
}

TEST(GuardedDecrementTest, IncrementThenDecrementIsIdentityInsideRange) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10'000; ++i) {
    const unsigned alpha = 2 + rng() % 15;
    const MaskTable t(alpha, 64);
    const unsigned l = rng() % t.eta();
    // Stay below MAX - 1 so the increment never reaches the sticky value.
    const uint64_t v = 1 + rng() % (t.max_value() - 2);  // [1, MAX-2]
    const uint64_t cell = WriteCounter(rng() & UsedBits(t), l, v, t);
    const auto up = SaturatingIncrement(cell, l, t);
    const auto down = GuardedDecrement(up.cell, l, t);
    ASSERT_EQ(down.cell, cell);
  }
}

}  // namespace
}  // namespace countbf
