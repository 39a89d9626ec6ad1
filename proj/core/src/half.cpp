#include "dlr/half.hpp"

#include <cmath>
#include <cstring>

namespace dlr::half {

std::uint16_t from_double(double v, bool* saturated) {
  if (saturated) *saturated = false;
  const std::uint16_t sign = std::signbit(v) ? 0x8000 : 0;
  if (std::isnan(v)) return 0x7E00;
  const double a = std::fabs(v);
  if (a == 0.0) return sign;
  if (std::isinf(a)) {
    if (saturated) *saturated = true;
    return sign | kMaxFiniteBits;
  }

  int exp2 = 0;
  std::frexp(a, &exp2);  // a = f * 2^exp2, f in [0.5, 1)
  int e = exp2 - 1;      // a = 1.xxx * 2^e

  if (e >= -14) {
    // 10 fraction bits; exact power-of-two scaling then RNE to an integer.
    double r = std::nearbyint(std::ldexp(a, 10 - e));
    if (r >= 2048.0) {
      r = 1024.0;
      ++e;
    }
    if (e > 15) {
      if (saturated) *saturated = true;
      return sign | kMaxFiniteBits;
    }
    return static_cast<std::uint16_t>(sign | ((e + 15) << 10) |
                                      (static_cast<std::uint16_t>(r) - 1024));
  }
  // Subnormal: units of 2^-24. A result of 1024 is the smallest normal.
  const double r = std::nearbyint(std::ldexp(a, 24));
  return static_cast<std::uint16_t>(sign | static_cast<std::uint16_t>(r));
}

float to_float(std::uint16_t bits) {
  const std::uint32_t sign = static_cast<std::uint32_t>(bits & 0x8000) << 16;
  const std::uint32_t exp = (bits >> 10) & 0x1F;
  const std::uint32_t frac = bits & 0x3FF;
  if (exp == 0) {
    const float mag = std::ldexp(static_cast<float>(frac), -24);
    return sign ? -mag : mag;
  }
  std::uint32_t out;
  if (exp == 31) {
    out = sign | 0x7F800000u | (frac << 13);
  } else {
    out = sign | ((exp - 15 + 127) << 23) | (frac << 13);
  }
  float f;
  std::memcpy(&f, &out, sizeof f);
  return f;
}

}  // namespace dlr::half
