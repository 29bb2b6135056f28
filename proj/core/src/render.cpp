#include "preciseum/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace preciseum {

namespace {

std::string printf_double(const char* spec, int precision, double v) {
  const int n = std::snprintf(nullptr, 0, spec, precision, v);
  std::string out(static_cast<std::size_t>(n), '\0');
  std::snprintf(out.data(), out.size() + 1, spec, precision, v);
  return out;
}

// Mask digits whose decimal place 10^p satisfies p <= limit.
void mask_scientific(std::string& s, double limit) {
  const auto e_pos = s.find('e');
  const long exponent = std::strtol(s.c_str() + e_pos + 1, nullptr, 10);
  long place = exponent;
  for (std::size_t i = 0; i < e_pos; ++i) {
    if (s[i] < '0' || s[i] > '9') continue;
    if (static_cast<double>(place) <= limit) s[i] = '?';
    --place;
  }
}

void mask_fixed(std::string& s, double limit) {
  const auto point = s.find('.');
  const std::size_t int_end = point == std::string::npos ? s.size() : point;
  std::size_t first_digit = 0;
  while (first_digit < int_end && (s[first_digit] < '0' || s[first_digit] > '9')) ++first_digit;
  long place = static_cast<long>(int_end - first_digit) - 1;
  for (std::size_t i = first_digit; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') continue;
    if (static_cast<double>(place) <= limit) s[i] = '?';
    --place;
  }
}

}  // namespace

std::string format(const XScalar& x, Style style) {
  const double v = x.value();
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  const int digits = std::max(style.digits, 1);
  std::string out = style.kind == Style::Kind::scientific
                        ? printf_double("%.*e", digits - 1, v)
                        : printf_double("%.*f", digits, v);
  const double delta = implied_delta(x);
  if (delta == 0.0) return out;
  const double limit = std::log10(2.0 * delta);
  if (style.kind == Style::Kind::scientific) mask_scientific(out, limit);
  else mask_fixed(out, limit);
  return out;
}

int exact_decimal_digits(const XScalar& x) {
  if (!x.is_finite()) return 0;
  const int width = display_digits(x.format());
  const std::string s = format(x, Style::scientific(width));
  int count = 0;
  for (char c : s) {
    if (c == '?' || c == 'e') break;
    if (c >= '0' && c <= '9') ++count;
  }
  return count;
}

int count_masked(std::string_view rendered) noexcept {
  return static_cast<int>(std::count(rendered.begin(), rendered.end(), '?'));
}

}  // namespace preciseum
