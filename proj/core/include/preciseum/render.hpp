#pragma once

#include <string>
#include <string_view>

#include "preciseum/xscalar.hpp"

namespace preciseum {

struct Style {
  enum class Kind { fixed, scientific };
  Kind kind = Kind::scientific;
  /// fixed: digits after the decimal point; scientific: significant digits.
  int digits = 16;

  static Style fixed(int k) noexcept { return {Kind::fixed, k}; }
  static Style scientific(int k) noexcept { return {Kind::scientific, k}; }
};

/// Render `x` and replace each digit whose place value is at most twice the
/// inaccuracy bound with '?'. Sign, point and exponent are never masked.
/// NaN and infinities render as "nan", "inf", "-inf".
std::string format(const XScalar& x, Style style);

/// Significant digits left unmasked by scientific rendering at the format's
/// full display width; 0 when the leading digit is masked.
int exact_decimal_digits(const XScalar& x);

/// Number of '?' characters in a rendering.
int count_masked(std::string_view rendered) noexcept;

}  // namespace preciseum
