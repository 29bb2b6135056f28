#include "preciseum/xscalar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace preciseum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_format(const XScalar& x, const XScalar& y) {
  if (x.format() != y.format()) {
    throw FormatMismatchError("operands use different float formats");
  }
}

// Error of the double-precision sum a + b (Knuth's TwoSum).
double two_sum_error(double a, double b, double s) noexcept {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

struct Rounded {
  double value;
  bool inexact;
};

Rounded narrow(double exact_in_double, bool double_inexact, FloatFormat f) noexcept {
  const double r = round_to_format(exact_in_double, f);
  return {r, double_inexact || r != exact_in_double};
}

XScalar finish(double value, double delta, bool inexact, FloatFormat f) noexcept {
  if (inexact) delta += half_ulp(value, f);
  return XScalar::make(value, bits_from_delta(value, delta, f), f);
}

}  // namespace

XScalar XScalar::from_exact(double value, FloatFormat format) noexcept {
  const double r = round_to_format(value, format);
  const int m = mantissa_bits(format);
  const bool same = r == value || (std::isnan(r) && std::isnan(value));
  return make(r, same ? m : m - 1, format);
}

XScalar XScalar::with_bits(double value, int bits, FloatFormat format) {
  if (bits < 0 || bits > mantissa_bits(format)) {
    throw RangeError("exact bit count out of range for format");
  }
  return make(round_to_format(value, format), bits, format);
}

XScalar XScalar::make(double value, int bits, FloatFormat format) noexcept {
  const int m = mantissa_bits(format);
  if (!std::isfinite(value)) bits = 0;
  else if (value == 0.0) bits = m;
  else bits = std::clamp(bits, 0, m);
  return XScalar(value, static_cast<std::uint8_t>(bits), format);
}

bool XScalar::is_finite() const noexcept { return std::isfinite(value_); }

double Inaccuracy::bound() const noexcept {
  switch (kind_) {
    case Kind::exact: return 0.0;
    case Kind::magnitude: return std::ldexp(1.0, exponent_);
    case Kind::unbounded: return kInf;
  }
  return kInf;
}

Inaccuracy inaccuracy(const XScalar& x) noexcept {
  if (!x.is_finite()) return Inaccuracy::unbounded();
  if (x.value() == 0.0) return Inaccuracy::exact();
  return Inaccuracy::magnitude(binary_exponent(x.value()) - x.exact_bits());
}

int bits_from_inaccuracy(double value, Inaccuracy d, FloatFormat format) noexcept {
  const int m = mantissa_bits(format);
  if (!std::isfinite(value) || d.kind() == Inaccuracy::Kind::unbounded) return 0;
  if (value == 0.0 || d.kind() == Inaccuracy::Kind::exact) return m;
  return std::clamp(binary_exponent(value) - d.exponent(), 0, m);
}

double operand_delta(const XScalar& x) noexcept {
  if (!x.is_finite()) return kInf;
  if (x.value() == 0.0 || x.is_full()) return 0.0;
  return std::ldexp(1.0, binary_exponent(x.value()) - x.exact_bits());
}

double implied_delta(const XScalar& x) noexcept { return inaccuracy(x).bound(); }

int bits_from_delta(double value, double delta, FloatFormat format) noexcept {
  const int m = mantissa_bits(format);
  if (!std::isfinite(value)) return 0;
  if (value == 0.0 || delta == 0.0) return m;
  if (!std::isfinite(delta)) return 0;
  // Round the bound down to a power of two: bits marked inexact must really
  // vary, and rounding up would compound by a bit per op in long chains.
  return std::clamp(binary_exponent(value) - std::ilogb(delta), 0, m);
}

XScalar add(const XScalar& x, const XScalar& y) {
  require_same_format(x, y);
  const FloatFormat f = x.format();
  const double s = x.value() + y.value();
  if (!std::isfinite(s)) return XScalar::make(s, 0, f);
  const auto r = narrow(s, two_sum_error(x.value(), y.value(), s) != 0.0, f);
  return finish(r.value, operand_delta(x) + operand_delta(y), r.inexact, f);
}

XScalar sub(const XScalar& x, const XScalar& y) { return add(x, -y); }

XScalar mul(const XScalar& x, const XScalar& y) {
  require_same_format(x, y);
  const FloatFormat f = x.format();
  const double p = x.value() * y.value();
  if (!std::isfinite(p)) return XScalar::make(p, 0, f);
  const auto r = narrow(p, std::fma(x.value(), y.value(), -p) != 0.0, f);
  const double dx = operand_delta(x);
  const double dy = operand_delta(y);
  const double delta = std::fabs(x.value()) * dy + std::fabs(y.value()) * dx + dx * dy;
  return finish(r.value, delta, r.inexact, f);
}

XScalar div(const XScalar& x, const XScalar& y) {
  require_same_format(x, y);
  const FloatFormat f = x.format();
  const double q = x.value() / y.value();
  if (!std::isfinite(q)) return XScalar::make(q, 0, f);
  const double dx = operand_delta(x);
  const double dy = operand_delta(y);
  const double ay = std::fabs(y.value());
  if (dy >= ay) return XScalar::make(round_to_format(q, f), 0, f);
  const auto r = narrow(q, std::fma(-q, y.value(), x.value()) != 0.0, f);
  // Worst case of |x'/y' - x/y| over the boxes, not a linearization.
  const double delta = (std::fabs(x.value()) * dy + ay * dx) / (ay * (ay - dy));
  return finish(r.value, delta, r.inexact, f);
}

namespace {

XScalar extremum(const XScalar& x, const XScalar& y, bool take_min) {
  require_same_format(x, y);
  const FloatFormat f = x.format();
  if (std::isnan(x.value())) return y;
  if (std::isnan(y.value())) return x;
  const bool x_wins = take_min ? !(y.value() < x.value()) : !(y.value() > x.value());
  const XScalar& winner = x_wins ? x : y;
  const double dx = operand_delta(x);
  const double dy = operand_delta(y);
  const bool disjoint =
      x.value() + dx < y.value() - dy || y.value() + dy < x.value() - dx;
  if (disjoint) return winner;
  return XScalar::make(winner.value(), bits_from_delta(winner.value(), std::max(dx, dy), f), f);
}

// Highest power-of-two position where |a| and |b| differ. Both are finite and
// share a grid of spacing 2^grid.
int highest_changed_position(double a, double b, int grid) noexcept {
  const auto ia = static_cast<std::uint64_t>(std::ldexp(std::fabs(a), -grid));
  const auto ib = static_cast<std::uint64_t>(std::ldexp(std::fabs(b), -grid));
  const std::uint64_t diff = ia ^ ib;
  return static_cast<int>(std::bit_width(diff)) - 1 + grid;
}

}  // namespace

XScalar min_op(const XScalar& x, const XScalar& y) { return extremum(x, y, true); }
XScalar max_op(const XScalar& x, const XScalar& y) { return extremum(x, y, false); }

XScalar round_op(RoundMode mode, const XScalar& x) noexcept {
  const FloatFormat f = x.format();
  if (!x.is_finite()) return x;
  const double v = x.value();
  double r = v;
  switch (mode) {
    case RoundMode::floor: r = std::floor(v); break;
    case RoundMode::ceil: r = std::ceil(v); break;
    case RoundMode::nearest: r = std::nearbyint(v); break;
    case RoundMode::trunc: r = std::trunc(v); break;
  }
  if (r == v) return x;
  if (r == 0.0) return XScalar::make(r, mantissa_bits(f), f);
  const int ex = binary_exponent(v);
  // v changed, so it has a fractional part and ex < 52. When r gained a
  // leading bit above v's, that bit is the highest change.
  const int er = binary_exponent(r);
  const int changed = er > ex ? er : highest_changed_position(v, r, ex - 52);
  const int first_inexact = ex - x.exact_bits();
  if (first_inexact < changed) return XScalar::make(r, mantissa_bits(f), f);
  return XScalar::make(r, x.exact_bits(), f);
}

Comparison approx_eq(const XScalar& x, const XScalar& y) {
  require_same_format(x, y);
  if (std::isnan(x.value()) || std::isnan(y.value())) return Comparison::unequal;
  const bool identical = std::bit_cast<std::uint64_t>(x.value()) ==
                         std::bit_cast<std::uint64_t>(y.value());
  if (identical && x.is_full() && y.is_full()) return Comparison::equal;
  if (!x.is_finite() || !y.is_finite()) {
    return identical ? Comparison::indistinguishable : Comparison::unequal;
  }
  const double gap = std::fabs(x.value() - y.value());
  if (gap <= implied_delta(x) + implied_delta(y)) return Comparison::indistinguishable;
  return Comparison::unequal;
}

}  // namespace preciseum
