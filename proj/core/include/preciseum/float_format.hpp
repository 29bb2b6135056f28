#pragma once

#include <cstdint>
#include <string_view>

namespace preciseum {

/// Supported storage formats. Values are always carried as `double` in memory
/// but are rounded to the chosen format after every operation.
enum class FloatFormat : std::uint8_t {
  binary64 = 0,
  binary32 = 1,
  binary16 = 2,
  bfloat16 = 3,
};

/// Significand width including the implicit leading bit.
constexpr int mantissa_bits(FloatFormat f) noexcept {
  switch (f) {
    case FloatFormat::binary64: return 53;
    case FloatFormat::binary32: return 24;
    case FloatFormat::binary16: return 11;
    case FloatFormat::bfloat16: return 8;
  }
  return 53;
}

/// Smallest normal binary exponent.
constexpr int min_normal_exponent(FloatFormat f) noexcept {
  switch (f) {
    case FloatFormat::binary64: return -1022;
    case FloatFormat::binary32: return -126;
    case FloatFormat::binary16: return -14;
    case FloatFormat::bfloat16: return -126;
  }
  return -1022;
}

constexpr int max_exponent(FloatFormat f) noexcept {
  switch (f) {
    case FloatFormat::binary64: return 1023;
    case FloatFormat::binary32: return 127;
    case FloatFormat::binary16: return 15;
    case FloatFormat::bfloat16: return 127;
  }
  return 1023;
}

/// Width in bytes of one value in the XARR1 stream.
constexpr int storage_bytes(FloatFormat f) noexcept {
  switch (f) {
    case FloatFormat::binary64: return 8;
    case FloatFormat::binary32: return 4;
    case FloatFormat::binary16:
    case FloatFormat::bfloat16: return 2;
  }
  return 8;
}

/// Number of significant decimal digits needed to display the format,
/// ceil(mantissa_bits * log10(2)).
int display_digits(FloatFormat f) noexcept;

std::string_view format_name(FloatFormat f) noexcept;

bool is_valid_format_code(std::uint8_t code) noexcept;

/// Round a double to the nearest value of `f` (ties to even). Overflow gives
/// a signed infinity; NaN passes through.
double round_to_format(double v, FloatFormat f) noexcept;

/// floor(log2|v|) for finite nonzero v, using the normalized form even for
/// subnormals.
int binary_exponent(double v) noexcept;

/// Half a unit in the last place of `v` in format `f`, at least the smallest
/// positive double.
double half_ulp(double v, FloatFormat f) noexcept;

/// Bit encodings for the narrow formats (used by serialization).
std::uint16_t encode_binary16(double v) noexcept;
double decode_binary16(std::uint16_t bits) noexcept;
std::uint16_t encode_bfloat16(double v) noexcept;
double decode_bfloat16(std::uint16_t bits) noexcept;

}  // namespace preciseum
