#include "preciseum/interval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "preciseum/error.hpp"

namespace preciseum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude residuals of products and quotients may be inexact.
constexpr double kTiny = 0x1p-960;

double down(double v) noexcept { return std::nextafter(v, -kInf); }
double up(double v) noexcept { return std::nextafter(v, kInf); }

Interval widen(double lo, double hi, int steps = 1) noexcept {
  for (int k = 0; k < steps; ++k) {
    lo = down(lo);
    hi = up(hi);
  }
  return {lo, hi};
}

// Round-to-nearest result r of an operation whose exact value is r + err.
Interval directed(double r, double err) noexcept {
  if (std::isnan(r)) return Interval::unbounded();
  if (std::isnan(err) || !std::isfinite(r)) return widen(r, r);
  return {err < 0.0 ? down(r) : r, err > 0.0 ? up(r) : r};
}

Interval sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  return directed(s, (a - (s - bb)) + (b - bb));
}

Interval product(double a, double b) noexcept {
  if (a == 0.0 || b == 0.0) return Interval::point(0.0);
  const double p = a * b;
  if (std::fabs(p) < kTiny) return widen(p, p);
  return directed(p, std::fma(a, b, -p));
}

Interval quotient(double a, double b) noexcept {
  if (a == 0.0) return Interval::point(0.0);
  if (std::isinf(b)) return std::isinf(a) ? Interval::unbounded() : widen(0.0, 0.0);
  const double q = a / b;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return widen(q, q);
  const double residual = std::fma(-q, b, a);
  return directed(q, b > 0.0 ? residual : -residual);
}

Interval from_corners(const Interval c[4]) noexcept {
  Interval r = c[0];
  for (int k = 1; k < 4; ++k) {
    if (std::isnan(c[k].lo) || std::isnan(c[k].hi)) return Interval::unbounded();
    r.lo = std::min(r.lo, c[k].lo);
    r.hi = std::max(r.hi, c[k].hi);
  }
  return r;
}

bool any_nan(const Interval& x) noexcept { return std::isnan(x.lo) || std::isnan(x.hi); }

// Image of a nondecreasing function evaluated through libm.
template <class F>
Interval increasing(const Interval& x, F f, int ulps = 2) {
  const double lo = f(x.lo);
  const double hi = f(x.hi);
  if (std::isnan(lo) || std::isnan(hi)) return Interval::unbounded();
  return widen(lo, hi, ulps);
}

template <class F>
Interval decreasing(const Interval& x, F f) {
  const double lo = f(x.hi);
  const double hi = f(x.lo);
  if (std::isnan(lo) || std::isnan(hi)) return Interval::unbounded();
  return widen(lo, hi, 2);
}

Interval clamp_unit(Interval r) noexcept { return {std::max(r.lo, -1.0), std::min(r.hi, 1.0)}; }

// True when some point c + k * period lies in [lo, hi], allowing a little
// slack for the rounding of pi so that extrema are never missed.
bool hits(double lo, double hi, double c, double period) noexcept {
  const double slack = 1e-12 * (1.0 + std::max(std::fabs(lo), std::fabs(hi)));
  const double k = std::ceil((lo - slack - c) / period);
  return c + k * period <= hi + slack;
}

Interval sine(const Interval& x, double phase) {
  constexpr double pi = std::numbers::pi;
  if (!std::isfinite(x.lo) || !std::isfinite(x.hi) || x.width() >= 2.0 * pi) return {-1.0, 1.0};
  // sin(t + phase) has maxima at pi/2 - phase + 2k pi and minima at -pi/2 - phase + 2k pi.
  auto f = [phase](double t) { return phase == 0.0 ? std::sin(t) : std::cos(t); };
  const double a = f(x.lo);
  const double b = f(x.hi);
  Interval r = widen(std::min(a, b), std::max(a, b), 2);
  if (hits(x.lo, x.hi, pi / 2 - phase, 2 * pi)) r.hi = 1.0;
  if (hits(x.lo, x.hi, -pi / 2 - phase, 2 * pi)) r.lo = -1.0;
  return clamp_unit(r);
}

Interval power(const Interval& x, int n) {
  if (n == 0) return Interval::point(1.0);
  if (n < 0) return Interval::point(1.0) / power(x, -n);
  auto point_power = [n](double v) {
    Interval acc = Interval::point(v);
    for (int k = 1; k < n; ++k) acc = acc * Interval::point(v);
    return acc;
  };
  if (n % 2 == 1) return {point_power(x.lo).lo, point_power(x.hi).hi};
  const double mag = std::max(std::fabs(x.lo), std::fabs(x.hi));
  const double mig = x.contains(0.0) ? 0.0 : std::min(std::fabs(x.lo), std::fabs(x.hi));
  return {point_power(mig).lo, point_power(mag).hi};
}

}  // namespace

Interval Interval::around(const XScalar& x) noexcept {
  const double v = x.value();
  if (!std::isfinite(v)) return unbounded();
  const double d = operand_delta(x);
  if (d == 0.0) return point(v);
  return {sum(v, -d).lo, sum(v, d).hi};
}

bool Interval::is_unbounded() const noexcept { return lo == -kInf && hi == kInf; }

Interval operator+(const Interval& x, const Interval& y) noexcept {
  if (any_nan(x) || any_nan(y)) return Interval::unbounded();
  const Interval lo = sum(x.lo, y.lo);
  const Interval hi = sum(x.hi, y.hi);
  if (std::isnan(lo.lo) || std::isnan(hi.hi)) return Interval::unbounded();
  return {lo.lo, hi.hi};
}

Interval operator-(const Interval& x) noexcept { return {-x.hi, -x.lo}; }

Interval operator-(const Interval& x, const Interval& y) noexcept { return x + (-y); }

Interval operator*(const Interval& x, const Interval& y) noexcept {
  if (any_nan(x) || any_nan(y)) return Interval::unbounded();
  const Interval c[4] = {product(x.lo, y.lo), product(x.lo, y.hi), product(x.hi, y.lo),
                         product(x.hi, y.hi)};
  return from_corners(c);
}

Interval operator/(const Interval& x, const Interval& y) noexcept {
  if (any_nan(x) || any_nan(y) || y.contains(0.0)) return Interval::unbounded();
  const Interval c[4] = {quotient(x.lo, y.lo), quotient(x.lo, y.hi), quotient(x.hi, y.lo),
                         quotient(x.hi, y.hi)};
  return from_corners(c);
}

Interval min(const Interval& x, const Interval& y) noexcept {
  return {std::min(x.lo, y.lo), std::min(x.hi, y.hi)};
}

Interval max(const Interval& x, const Interval& y) noexcept {
  return {std::max(x.lo, y.lo), std::max(x.hi, y.hi)};
}

Interval hull(const Interval& x, const Interval& y) noexcept {
  return {std::min(x.lo, y.lo), std::max(x.hi, y.hi)};
}

Interval round(RoundMode mode, const Interval& x) noexcept {
  auto f = [mode](double v) {
    switch (mode) {
      case RoundMode::floor: return std::floor(v);
      case RoundMode::ceil: return std::ceil(v);
      case RoundMode::nearest: return std::nearbyint(v);
      case RoundMode::trunc: return std::trunc(v);
    }
    return v;
  };
  return {f(x.lo), f(x.hi)};
}

Interval apply(const UnaryFn& f, const Interval& x) {
  if (any_nan(x)) return Interval::unbounded();
  constexpr double pi = std::numbers::pi;
  switch (f.kind()) {
    case UnaryKind::sin: return sine(x, 0.0);
    case UnaryKind::cos: return sine(x, pi / 2);
    case UnaryKind::tan: {
      if (!std::isfinite(x.lo) || !std::isfinite(x.hi) || x.width() >= pi ||
          hits(x.lo, x.hi, pi / 2, pi)) {
        return Interval::unbounded();
      }
      return increasing(x, [](double t) { return std::tan(t); });
    }
    case UnaryKind::asin:
      if (x.lo < -1.0 || x.hi > 1.0) return Interval::unbounded();
      return increasing(x, [](double t) { return std::asin(t); });
    case UnaryKind::acos:
      if (x.lo < -1.0 || x.hi > 1.0) return Interval::unbounded();
      return decreasing(x, [](double t) { return std::acos(t); });
    case UnaryKind::atan: return increasing(x, [](double t) { return std::atan(t); });
    case UnaryKind::ln:
      if (x.lo <= 0.0) return Interval::unbounded();
      return increasing(x, [](double t) { return std::log(t); });
    case UnaryKind::exp: {
      Interval r = increasing(x, [](double t) { return std::exp(t); });
      r.lo = std::max(r.lo, 0.0);
      return r;
    }
    case UnaryKind::sqrt: {
      if (x.lo < 0.0) return Interval::unbounded();
      const double a = std::sqrt(x.lo);
      const double b = std::sqrt(x.hi);
      const Interval lo = a == 0.0 || !std::isfinite(a) ? widen(a, a) : directed(a, std::fma(-a, a, x.lo));
      const Interval hi = b == 0.0 || !std::isfinite(b) ? widen(b, b) : directed(b, std::fma(-b, b, x.hi));
      return {std::max(lo.lo, 0.0), hi.hi};
    }
    case UnaryKind::recip: return Interval::point(1.0) / x;
    case UnaryKind::pow_int: return power(x, static_cast<int>(f.parameter()));
    case UnaryKind::scale: return x * Interval::point(f.parameter());
    case UnaryKind::add_const: return x + Interval::point(f.parameter());
    case UnaryKind::sigmoid: {
      Interval r = increasing(x, [&f](double t) { return f.evaluate(t); }, f.evaluation_ulps());
      return {std::max(r.lo, 0.0), std::min(r.hi, 1.0)};
    }
    case UnaryKind::tanh: return clamp_unit(increasing(x, [](double t) { return std::tanh(t); }));
  }
  throw CapabilityError("no interval counterpart for " + f.name());
}

}  // namespace preciseum
