#pragma once

#include <cstdint>

#include "preciseum/error.hpp"
#include "preciseum/float_format.hpp"

namespace preciseum {

/// A floating value together with the number of leading significand bits
/// that are known to agree with the real value it approximates.
///
/// Invariants (enforced by every constructor):
///  * 0 <= exact_bits <= mantissa_bits(format)
///  * NaN and infinities carry 0 exact bits
///  * signed zeros carry mantissa_bits(format) exact bits
///
/// A value holding all mantissa bits is treated as exactly known when it is
/// used as an operand: its stored value *is* the real value, and only the
/// rounding of the operation producing a new value adds inaccuracy.
class XScalar {
 public:
  /// Exact 0.0 in binary64.
  XScalar() noexcept = default;

  /// Treat `value` as an exact real. If it is not representable in `format`
  /// the conversion rounding costs one bit.
  static XScalar from_exact(double value, FloatFormat format = FloatFormat::binary64) noexcept;

  /// Pair `value` with `bits` exact bits. Throws RangeError when bits is
  /// outside [0, mantissa_bits]. Special values override `bits`.
  static XScalar with_bits(double value, int bits, FloatFormat format = FloatFormat::binary64);

  /// Build from an already-rounded value and a clamped bit count. Special
  /// value rules are applied, but no range check is made.
  static XScalar make(double value, int bits, FloatFormat format) noexcept;

  double value() const noexcept { return value_; }
  int exact_bits() const noexcept { return bits_; }
  FloatFormat format() const noexcept { return format_; }
  int max_bits() const noexcept { return mantissa_bits(format_); }

  bool is_full() const noexcept { return bits_ == max_bits(); }
  bool is_finite() const noexcept;

  XScalar operator-() const noexcept { return make(-value_, bits_, format_); }

  friend bool operator==(const XScalar&, const XScalar&) = default;

 private:
  XScalar(double value, std::uint8_t bits, FloatFormat format) noexcept
      : value_(value), bits_(bits), format_(format) {}

  double value_ = 0.0;
  std::uint8_t bits_ = 53;
  FloatFormat format_ = FloatFormat::binary64;
};

/// Absolute inaccuracy of an XScalar as a power of two.
class Inaccuracy {
 public:
  enum class Kind : std::uint8_t { exact, magnitude, unbounded };

  static Inaccuracy exact() noexcept { return Inaccuracy(Kind::exact, 0); }
  static Inaccuracy magnitude(int k) noexcept { return Inaccuracy(Kind::magnitude, k); }
  static Inaccuracy unbounded() noexcept { return Inaccuracy(Kind::unbounded, 0); }

  Kind kind() const noexcept { return kind_; }
  /// The exponent k of the bound 2^k; meaningful only for Kind::magnitude.
  int exponent() const noexcept { return exponent_; }
  /// 0, 2^k or +infinity.
  double bound() const noexcept;

  friend bool operator==(const Inaccuracy&, const Inaccuracy&) = default;

 private:
  Inaccuracy(Kind kind, int k) noexcept : kind_(kind), exponent_(k) {}
  Kind kind_;
  int exponent_;
};

/// Magnitude(e - exact_bits) for finite nonzero values, Exact for zero,
/// unbounded for NaN/Inf.
Inaccuracy inaccuracy(const XScalar& x) noexcept;

/// Bit count implied by an inaccuracy for a value: clamp(e - k, 0, max).
int bits_from_inaccuracy(double value, Inaccuracy d, FloatFormat format) noexcept;

/// Absolute error bound used when `x` enters an operation: 0 when x holds
/// all mantissa bits or is zero, 2^(e - bits) otherwise, +inf for NaN/Inf.
double operand_delta(const XScalar& x) noexcept;

/// Bound implied by the stored bit count, 2^(e - bits) (also for full bits).
double implied_delta(const XScalar& x) noexcept;

/// Convert an absolute error bound on `value` into exact bits:
/// clamp(e - floor(log2 delta), 0, mantissa_bits). Zero values and zero
/// deltas give full bits; non-finite values or deltas give 0.
int bits_from_delta(double value, double delta, FloatFormat format) noexcept;

XScalar add(const XScalar& x, const XScalar& y);
XScalar sub(const XScalar& x, const XScalar& y);
XScalar mul(const XScalar& x, const XScalar& y);
XScalar div(const XScalar& x, const XScalar& y);

/// Value is the IEEE minimum; precision comes from the winner when the
/// inaccuracy intervals are disjoint and from the wider interval otherwise.
XScalar min_op(const XScalar& x, const XScalar& y);
XScalar max_op(const XScalar& x, const XScalar& y);

enum class RoundMode : std::uint8_t { floor, ceil, nearest, trunc };
XScalar round_op(RoundMode mode, const XScalar& x) noexcept;

enum class Comparison : std::uint8_t { equal, unequal, indistinguishable };
Comparison approx_eq(const XScalar& x, const XScalar& y);

inline XScalar operator+(const XScalar& x, const XScalar& y) { return add(x, y); }
inline XScalar operator-(const XScalar& x, const XScalar& y) { return sub(x, y); }
inline XScalar operator*(const XScalar& x, const XScalar& y) { return mul(x, y); }
inline XScalar operator/(const XScalar& x, const XScalar& y) { return div(x, y); }

/// Thrown when two operands use different storage formats.
class FormatMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace preciseum
