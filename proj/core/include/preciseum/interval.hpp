#pragma once

#include <limits>

#include "preciseum/unary.hpp"
#include "preciseum/xscalar.hpp"

namespace preciseum {

/// Closed interval [lo, hi] with outward-rounded endpoints. Every operation
/// returns an interval containing the exact real image of its operands.
/// The whole real line [-inf, +inf] doubles as the unbounded marker
/// (division by an interval containing zero, domain violations, NaN).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) noexcept { return {v, v}; }
  static Interval unbounded() noexcept {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  /// [v - delta, v + delta] for the tracked operand delta of x.
  static Interval around(const XScalar& x) noexcept;

  bool is_unbounded() const noexcept;
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const noexcept { return lo <= o.lo && o.hi <= hi; }
  double width() const noexcept { return hi - lo; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

Interval operator+(const Interval& x, const Interval& y) noexcept;
Interval operator-(const Interval& x, const Interval& y) noexcept;
Interval operator*(const Interval& x, const Interval& y) noexcept;
Interval operator/(const Interval& x, const Interval& y) noexcept;
Interval operator-(const Interval& x) noexcept;
Interval min(const Interval& x, const Interval& y) noexcept;
Interval max(const Interval& x, const Interval& y) noexcept;
Interval hull(const Interval& x, const Interval& y) noexcept;
Interval round(RoundMode mode, const Interval& x) noexcept;
/// Image of x under f, widened by f.evaluation_ulps().
Interval apply(const UnaryFn& f, const Interval& x);

}  // namespace preciseum
