#pragma once

#include <cstdint>
#include <string>

#include "preciseum/xscalar.hpp"

namespace preciseum {

enum class UnaryKind : std::uint8_t {
  sin, cos, tan, asin, acos, atan, ln, exp, sqrt, recip,
  pow_int, scale, add_const, sigmoid, tanh,
};

/// A differentiable elementary function together with its condition number
/// C_f(x) = |x f'(x) / f(x)|.
class UnaryFn {
 public:
  static UnaryFn sin() noexcept { return UnaryFn(UnaryKind::sin); }
  static UnaryFn cos() noexcept { return UnaryFn(UnaryKind::cos); }
  static UnaryFn tan() noexcept { return UnaryFn(UnaryKind::tan); }
  static UnaryFn asin() noexcept { return UnaryFn(UnaryKind::asin); }
  static UnaryFn acos() noexcept { return UnaryFn(UnaryKind::acos); }
  static UnaryFn atan() noexcept { return UnaryFn(UnaryKind::atan); }
  static UnaryFn ln() noexcept { return UnaryFn(UnaryKind::ln); }
  static UnaryFn exp() noexcept { return UnaryFn(UnaryKind::exp); }
  static UnaryFn sqrt() noexcept { return UnaryFn(UnaryKind::sqrt); }
  static UnaryFn recip() noexcept { return UnaryFn(UnaryKind::recip); }
  static UnaryFn sigmoid() noexcept { return UnaryFn(UnaryKind::sigmoid); }
  static UnaryFn tanh() noexcept { return UnaryFn(UnaryKind::tanh); }
  static UnaryFn pow_int(int n) noexcept { return UnaryFn(UnaryKind::pow_int, n); }
  static UnaryFn scale(double a) noexcept { return UnaryFn(UnaryKind::scale, a); }
  static UnaryFn add_const(double a) noexcept { return UnaryFn(UnaryKind::add_const, a); }

  UnaryKind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }

  /// f(x) in binary64 (libm for transcendental functions).
  double evaluate(double x) const noexcept;

  /// C_f(x); +inf at poles, NaN outside the domain. Removable singularities
  /// (sin, tan, asin, atan, tanh at 0) use their limit 1.
  double condition_number(double x) const noexcept;

  /// Derivative f'(x), used by the autodiff chain rule and the tests.
  double derivative(double x) const noexcept;

  /// True when evaluation adds no rounding of its own: scaling by a power of two.
  bool is_exact_scaling() const noexcept;

  /// Ulps of evaluation error assumed for `evaluate`: 0 for power-of-two
  /// scaling, 6 for sigmoid (exp, add, divide), 2 otherwise.
  int evaluation_ulps() const noexcept;

  std::string name() const;

  friend bool operator==(const UnaryFn&, const UnaryFn&) = default;

 private:
  explicit UnaryFn(UnaryKind kind, double param = 0.0) noexcept : kind_(kind), param_(param) {}
  UnaryKind kind_;
  double param_;
};

/// f(x) loses log2 C_f(x) bits: the bound is C_f(x) |f(x)| dx / |x|, raised to
/// the distance to f at the ends of [x - dx, x + dx] (clamped to the domain)
/// when the function curves across the interval, plus evaluation_ulps() for
/// the evaluation itself. An interval containing a pole, a pole at x, or a
/// domain violation gives 0 bits.
XScalar apply_unary(const UnaryFn& f, const XScalar& x) noexcept;

}  // namespace preciseum
