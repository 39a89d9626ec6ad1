#include "dlr/slicing.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dlr/error.hpp"
#include "oracles.hpp"

namespace dlr {
namespace {

TEST(DensificationConfig, DerivesSmallestDiscard) {
  const auto c = DensificationConfig::derive(30522, 768, SliceStrategy::kStride);
  EXPECT_EQ(c.discard_count, 570u);
  EXPECT_EQ(c.slice_width, 39u);
  EXPECT_EQ(c.kept_count(), 29952u);

  // Auto-derivation picks the smallest discard; keeping 570 discarded
  // gives the widths used for the 256 and 128 dim variants.
  EXPECT_EQ(DensificationConfig::derive(30522, 256, SliceStrategy::kStride).discard_count, 58u);
  EXPECT_EQ(DensificationConfig::derive(30522, 128, SliceStrategy::kStride).discard_count, 58u);
  EXPECT_EQ(DensificationConfig::with_discard(30522, 256, 570, SliceStrategy::kStride).slice_width,
            117u);
  EXPECT_EQ(DensificationConfig::with_discard(30522, 128, 570, SliceStrategy::kStride).slice_width,
            234u);
  EXPECT_EQ(DensificationConfig::derive(15, 3, SliceStrategy::kContiguous).discard_count, 0u);
}

TEST(DensificationConfig, RejectsDivisibilityViolation) {
  try {
    DensificationConfig::with_discard(16, 3, 0, SliceStrategy::kStride);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("vocab_size=16"), std::string::npos) << msg;
    EXPECT_NE(msg.find("M=3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("N=5"), std::string::npos) << msg;
    EXPECT_NE(msg.find("discard_count=0"), std::string::npos) << msg;
  }
  EXPECT_THROW(DensificationConfig::derive(10, 0, SliceStrategy::kStride), ConfigError);
  EXPECT_THROW(DensificationConfig::derive(2, 3, SliceStrategy::kStride), ConfigError);
  EXPECT_THROW(DensificationConfig::with_discard(10, 2, 11, SliceStrategy::kStride), ConfigError);
}

TEST(SliceAssignment, ContiguousExample) {
  const auto a = build_assignment(DensificationConfig::derive(15, 3, SliceStrategy::kContiguous));
  EXPECT_EQ(a.forward(7), (SlotRef{1, 2}));
  const auto small = build_assignment(DensificationConfig::derive(6, 2, SliceStrategy::kContiguous));
  EXPECT_EQ(invert_assignment(small, 1, 0), 3u);
}

TEST(SliceAssignment, StrideExample) {
  const auto a = build_assignment(DensificationConfig::derive(15, 3, SliceStrategy::kStride));
  for (std::uint32_t t = 0; t < 3; ++t) EXPECT_EQ(a.forward(t), (SlotRef{t, 0}));
  const auto small = build_assignment(DensificationConfig::derive(6, 2, SliceStrategy::kStride));
  EXPECT_EQ(invert_assignment(small, 1, 2), 5u);
}

TEST(SliceAssignment, DiscardedIdsHaveNoSlot) {
  const auto a = build_assignment(DensificationConfig::derive(30522, 768, SliceStrategy::kStride));
  EXPECT_FALSE(a.forward(0).has_value());
  EXPECT_FALSE(a.forward(569).has_value());
  EXPECT_EQ(a.forward(570), (SlotRef{0, 0}));
  EXPECT_EQ(a.invert(0, 0), 570u);
  EXPECT_THROW(a.forward(30522), BoundsError);
}

TEST(SliceAssignment, InvertRejectsOutOfRange) {
  const auto a = build_assignment(DensificationConfig::derive(6, 2, SliceStrategy::kStride));
  EXPECT_THROW(a.invert(2, 0), BoundsError);
  EXPECT_THROW(a.invert(0, 3), BoundsError);
}

TEST(SliceAssignment, RandomIsSeedDeterministic) {
  const auto c1 = DensificationConfig::derive(3000, 30, SliceStrategy::kRandom, 11);
  auto c2 = c1;
  c2.random_seed = 12;
  const auto a = build_assignment(c1);
  const auto b = build_assignment(c1);
  const auto other = build_assignment(c2);
  bool differs = false;
  for (std::uint32_t t = 0; t < 3000; ++t) {
    EXPECT_EQ(a.forward(t), b.forward(t));
    differs |= !(a.forward(t) == other.forward(t));
  }
  EXPECT_TRUE(differs);
}

TEST(SeededPermutation, KnownPrefixIsStable) {
  // Pins the algorithm: mt19937_64 + rejection-sampled Fisher-Yates.
  const auto p = seeded_permutation(10, 42);
  const auto q = seeded_permutation(10, 42);
  EXPECT_EQ(p, q);
  std::set<std::uint32_t> seen(p.begin(), p.end());
  EXPECT_EQ(seen.size(), 10u);
}

class BijectionTest : public ::testing::TestWithParam<SliceStrategy> {};

TEST_P(BijectionTest, ForwardIsBijectiveAndInvertRoundTrips) {
  for (auto [v, m] : {std::pair{6u, 2u}, {1920u, 16u}, {1921u, 64u}, {100000u, 768u}}) {
    const auto c = DensificationConfig::derive(v, m, GetParam(), 99);
    const auto a = build_assignment(c);
    std::vector<bool> hit(c.kept_count(), false);
    for (std::uint32_t t = 0; t < v; ++t) {
      const auto slot = a.forward(t);
      if (t < c.discard_count) {
        ASSERT_FALSE(slot.has_value());
        continue;
      }
      ASSERT_TRUE(slot.has_value());
      ASSERT_LT(slot->slice, c.target_dims);
      ASSERT_LT(slot->position, c.slice_width);
      const std::size_t flat = std::size_t{slot->slice} * c.slice_width + slot->position;
      ASSERT_FALSE(hit[flat]) << "slot reused by term " << t;
      hit[flat] = true;
      ASSERT_EQ(a.invert(slot->slice, slot->position), t);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllStrategies, BijectionTest,
                         ::testing::Values(SliceStrategy::kContiguous, SliceStrategy::kStride,
                                           SliceStrategy::kRandom));

TEST(SliceAssignment, StrideSeparatesNeighboursContiguousGroupsThem) {
  const auto stride = build_assignment(DensificationConfig::derive(2000, 40, SliceStrategy::kStride));
  const auto contig =
      build_assignment(DensificationConfig::derive(2000, 40, SliceStrategy::kContiguous));
  for (std::uint32_t k = 0; k + 1 < 2000; ++k) {
    EXPECT_NE(stride.forward(k)->slice, stride.forward(k + 1)->slice);
    const bool same = contig.forward(k)->slice == contig.forward(k + 1)->slice;
    EXPECT_EQ(same, (k + 1) % 50 != 0);
  }
}

TEST(SliceAssignment, MatchesClosedFormLayouts) {
  for (auto s : {SliceStrategy::kContiguous, SliceStrategy::kStride}) {
    const auto c = DensificationConfig::derive(1930, 64, s);
    const auto a = build_assignment(c);
    for (std::uint32_t m = 0; m < c.target_dims; ++m) {
      for (std::uint32_t e = 0; e < c.slice_width; ++e) {
        ASSERT_EQ(a.invert(m, e), fixtures::closed_form_term(c, m, e));
      }
    }
  }
}

TEST(SliceStrategy, ParsesNames) {
  EXPECT_EQ(parse_slice_strategy("stride"), SliceStrategy::kStride);
  EXPECT_EQ(to_string(parse_slice_strategy("random")), "random");
  EXPECT_THROW(parse_slice_strategy("zigzag"), ConfigError);
}

}  // namespace
}  // namespace dlr
