#include "preciseum/float_format.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace preciseum {

namespace {

double max_finite(FloatFormat f) noexcept {
  const int m = mantissa_bits(f);
  return std::ldexp(2.0 - std::ldexp(1.0, 1 - m), max_exponent(f));
}

double round_generic(double v, FloatFormat f) noexcept {
  if (!std::isfinite(v) || v == 0.0) return v;
  int e = binary_exponent(v);
  if (e < min_normal_exponent(f)) e = min_normal_exponent(f);
  const int quantum = e - (mantissa_bits(f) - 1);
  // Scaling by a power of two is exact; nearbyint rounds ties to even.
  double r = std::ldexp(std::nearbyint(std::ldexp(v, -quantum)), quantum);
  if (std::fabs(r) > max_finite(f)) r = std::copysign(std::numeric_limits<double>::infinity(), v);
  if (r == 0.0) r = std::copysign(0.0, v);
  return r;
}

}  // namespace

int display_digits(FloatFormat f) noexcept {
  return static_cast<int>(std::ceil(mantissa_bits(f) * std::log10(2.0)));
}

std::string_view format_name(FloatFormat f) noexcept {
  switch (f) {
    case FloatFormat::binary64: return "binary64";
    case FloatFormat::binary32: return "binary32";
    case FloatFormat::binary16: return "binary16";
    case FloatFormat::bfloat16: return "bfloat16";
  }
  return "unknown";
}

bool is_valid_format_code(std::uint8_t code) noexcept { return code <= 3; }

double round_to_format(double v, FloatFormat f) noexcept {
  switch (f) {
    case FloatFormat::binary64: return v;
    case FloatFormat::binary32: return static_cast<double>(static_cast<float>(v));
    case FloatFormat::binary16:
    case FloatFormat::bfloat16: return round_generic(v, f);
  }
  return v;
}

int binary_exponent(double v) noexcept { return std::ilogb(v); }

double half_ulp(double v, FloatFormat f) noexcept {
  int e = (std::isfinite(v) && v != 0.0) ? binary_exponent(v) : min_normal_exponent(f);
  if (e < min_normal_exponent(f)) e = min_normal_exponent(f);
  // Half a binary64 subnormal ulp is not a double; round it up, not to zero.
  return std::max(std::ldexp(1.0, e - mantissa_bits(f)), std::numeric_limits<double>::denorm_min());
}

std::uint16_t encode_binary16(double v) noexcept {
  const double r = round_to_format(v, FloatFormat::binary16);
  const std::uint16_t sign = std::signbit(r) ? 0x8000u : 0u;
  if (std::isnan(r)) return 0x7e00u;
  if (std::isinf(r)) return sign | 0x7c00u;
  if (r == 0.0) return sign;
  const double a = std::fabs(r);
  const int e = binary_exponent(a);
  if (e < -14) {
    return static_cast<std::uint16_t>(sign | static_cast<std::uint16_t>(std::ldexp(a, 24)));
  }
  const auto frac = static_cast<std::uint16_t>(std::ldexp(a, 10 - e) - 1024.0);
  return static_cast<std::uint16_t>(sign | ((e + 15) << 10) | frac);
}

double decode_binary16(std::uint16_t bits) noexcept {
  const bool neg = (bits & 0x8000u) != 0;
  const int exp = (bits >> 10) & 0x1f;
  const int frac = bits & 0x3ff;
  double r;
  if (exp == 0x1f) {
    r = frac != 0 ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
  } else if (exp == 0) {
    r = std::ldexp(static_cast<double>(frac), -24);
  } else {
    r = std::ldexp(1024.0 + frac, exp - 25);
  }
  return neg ? -r : r;
}

std::uint16_t encode_bfloat16(double v) noexcept {
  const double r = round_to_format(v, FloatFormat::bfloat16);
  if (std::isnan(r)) return 0x7fc0u;
  // r is exactly representable as binary32; bfloat16 is its upper half.
  const auto word = std::bit_cast<std::uint32_t>(static_cast<float>(r));
  return static_cast<std::uint16_t>(word >> 16);
}

double decode_bfloat16(std::uint16_t bits) noexcept {
  const std::uint32_t word = static_cast<std::uint32_t>(bits) << 16;
  return static_cast<double>(std::bit_cast<float>(word));
}

}  // namespace preciseum
