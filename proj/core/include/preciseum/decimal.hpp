#pragma once

#include <string_view>

#include "preciseum/xscalar.hpp"

namespace preciseum {

/// Parse a decimal numeral ([+-]digits[.digits][e[+-]digits]). The value is
/// correctly rounded; when the numeral is not exactly representable the
/// conversion costs one bit. Throws ParseError on malformed or out-of-range
/// input.
XScalar from_decimal(std::string_view text, FloatFormat format = FloatFormat::binary64);

/// True when `text` denotes exactly the real number `value`.
bool decimal_equals(std::string_view text, double value);

}  // namespace preciseum
