#include "preciseum/decimal.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace preciseum {

namespace {

// digits * 10^exp10 with no leading or trailing zeros in `digits`; an empty
// digit string is zero.
struct Decimal {
  bool negative = false;
  std::string digits;
  long exp10 = 0;

  void normalize() {
    const auto first = digits.find_first_not_of('0');
    if (first == std::string::npos) {
      digits.clear();
      exp10 = 0;
      negative = false;
      return;
    }
    digits.erase(0, first);
    const auto last = digits.find_last_not_of('0');
    exp10 += static_cast<long>(digits.size() - 1 - last);
    digits.erase(last + 1);
  }
};

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

std::optional<Decimal> parse_numeral(std::string_view text) {
  Decimal d;
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    d.negative = text[i] == '-';
    ++i;
  }
  std::size_t int_digits = 0;
  while (i < text.size() && is_digit(text[i])) {
    d.digits.push_back(text[i++]);
    ++int_digits;
  }
  std::size_t frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && is_digit(text[i])) {
      d.digits.push_back(text[i++]);
      ++frac_digits;
    }
  }
  if (int_digits + frac_digits == 0) return std::nullopt;
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool neg_exp = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      neg_exp = text[i] == '-';
      ++i;
    }
    const std::size_t start = i;
    while (i < text.size() && is_digit(text[i])) {
      if (exponent < 100000) exponent = exponent * 10 + (text[i] - '0');
      ++i;
    }
    if (i == start) return std::nullopt;
    if (neg_exp) exponent = -exponent;
  }
  if (i != text.size()) return std::nullopt;
  d.exp10 = exponent - static_cast<long>(frac_digits);
  d.normalize();
  return d;
}

// Exact comparison of a parsed numeral with a binary value. A normalized
// numeral equal to a finite double has its decimal exponent in [-1074, 308].
bool same_number(const Decimal& d, double value) {
  if (d.digits.empty()) return value == 0.0;
  if (value == 0.0 || d.negative != std::signbit(value)) return false;
  if (d.exp10 < -1074 || d.exp10 > 308) return false;
  mpz_class numerator(d.digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(d.exp10 < 0 ? -d.exp10 : d.exp10));
  mpq_class decimal = d.exp10 < 0 ? mpq_class(numerator, scale) : mpq_class(numerator * scale);
  decimal.canonicalize();
  return decimal == mpq_class(std::fabs(value));
}

}  // namespace

bool decimal_equals(std::string_view text, double value) {
  if (!std::isfinite(value)) return false;
  const auto parsed = parse_numeral(text);
  if (!parsed) return false;
  return same_number(*parsed, value);
}

XScalar from_decimal(std::string_view text, FloatFormat format) {
  const auto parsed = parse_numeral(text);
  if (!parsed) throw ParseError("not a decimal numeral: '" + std::string(text) + "'");
  std::string_view body = text;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec == std::errc::result_out_of_range && !parsed->digits.empty() && parsed->exp10 < 0) {
    value = parsed->negative ? -0.0 : 0.0;  // underflow to zero
  } else if (ec != std::errc() || ptr != body.data() + body.size()) {
    throw ParseError("decimal numeral out of range: '" + std::string(text) + "'");
  }
  const double rounded = round_to_format(value, format);
  if (!std::isfinite(rounded)) {
    throw ParseError("decimal numeral overflows the format: '" + std::string(text) + "'");
  }
  const int m = mantissa_bits(format);
  if (rounded == 0.0) return XScalar::make(rounded, m, format);
  const bool exact = same_number(*parsed, rounded);
  return XScalar::make(rounded, exact ? m : m - 1, format);
}

}  // namespace preciseum
