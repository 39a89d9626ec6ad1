#pragma once

#include <cstdint>

namespace dlr::half {

/// Largest finite binary16 value.
inline constexpr double kMaxFinite = 65504.0;
inline constexpr std::uint16_t kMaxFiniteBits = 0x7BFF;

/// Round-to-nearest-even conversion from double to IEEE binary16 bits.
/// Magnitudes above the largest finite half (including infinities)
/// saturate to +/-65504; `saturated` is set when that happens. NaN maps to
/// the canonical quiet NaN.
std::uint16_t from_double(double v, bool* saturated = nullptr);

float to_float(std::uint16_t bits);

/// Quantize-dequantize round trip.
inline float round_trip(double v) { return to_float(from_double(v)); }

}  // namespace dlr::half
