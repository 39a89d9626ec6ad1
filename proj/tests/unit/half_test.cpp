#include "dlr/half.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace dlr {
namespace {

TEST(Half, KnownEncodings) {
  EXPECT_EQ(half::from_double(0.0), 0x0000);
  EXPECT_EQ(half::from_double(-0.0), 0x8000);
  EXPECT_EQ(half::from_double(1.0), 0x3C00);
  EXPECT_EQ(half::from_double(-2.0), 0xC000);
  EXPECT_EQ(half::from_double(65504.0), 0x7BFF);
  EXPECT_EQ(half::from_double(0.1), 0x2E66);  // 0.0999755859375
  EXPECT_EQ(half::from_double(std::ldexp(1.0, -14)), 0x0400);
  EXPECT_EQ(half::from_double(std::ldexp(1.0, -24)), 0x0001);
  EXPECT_EQ(half::to_float(0x2E66), 0.0999755859375f);
  EXPECT_EQ(half::to_float(0x0001), std::ldexp(1.0f, -24));
  EXPECT_TRUE(std::isnan(half::to_float(half::from_double(std::nan("")))));
}

TEST(Half, RoundsToNearestEven) {
  // Between 1 and 1 + 2^-10 the midpoint rounds to the even mantissa (1).
  EXPECT_EQ(half::from_double(1.0 + std::ldexp(1.0, -11)), 0x3C00);
  // Between 1 + 2^-10 and 1 + 2^-9 the midpoint rounds up to the even one.
  EXPECT_EQ(half::from_double(1.0 + 3 * std::ldexp(1.0, -11)), 0x3C02);
  // Just above the midpoint rounds up.
  EXPECT_EQ(half::from_double(1.0 + std::ldexp(1.0, -11) + std::ldexp(1.0, -30)), 0x3C01);
  // Mantissa carry into the exponent.
  EXPECT_EQ(half::from_double(2.0 - std::ldexp(1.0, -12)), 0x4000);
}

TEST(Half, SaturatesAboveMaxFinite) {
  bool sat = false;
  EXPECT_EQ(half::from_double(70000.0, &sat), 0x7BFF);
  EXPECT_TRUE(sat);
  EXPECT_EQ(half::from_double(-1e9, &sat), 0xFBFF);
  EXPECT_TRUE(sat);
  EXPECT_EQ(half::from_double(INFINITY, &sat), 0x7BFF);
  half::from_double(65504.0, &sat);
  EXPECT_FALSE(sat);
}

TEST(Half, RelativeErrorBoundOnNormalRange) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> exponent(-14.0, std::log2(65504.0));
  for (int i = 0; i < 200000; ++i) {
    const double v = std::exp2(exponent(rng));
    const double back = half::round_trip(v);
    ASSERT_LE(std::abs(back - v) / v, std::ldexp(1.0, -11)) << v;
  }
}

TEST(Half, EveryEncodingRoundTrips) {
  for (std::uint32_t bits = 0; bits < 0x10000; ++bits) {
    const auto h = static_cast<std::uint16_t>(bits);
    const std::uint32_t exp = (bits >> 10) & 0x1F;
    if (exp == 31) continue;  // inf / nan
    ASSERT_EQ(half::from_double(half::to_float(h)), h) << std::hex << bits;
  }
}

}  // namespace
}  // namespace dlr
