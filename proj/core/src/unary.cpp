#include "preciseum/unary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace preciseum {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double sigmoid_value(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

bool is_power_of_two(double a) noexcept {
  if (!std::isfinite(a) || a == 0.0) return false;
  int e = 0;
  return std::fabs(std::frexp(a, &e)) == 0.5;
}

}  // namespace

double UnaryFn::evaluate(double x) const noexcept {
  switch (kind_) {
    case UnaryKind::sin: return std::sin(x);
    case UnaryKind::cos: return std::cos(x);
    case UnaryKind::tan: return std::tan(x);
    case UnaryKind::asin: return std::asin(x);
    case UnaryKind::acos: return std::acos(x);
    case UnaryKind::atan: return std::atan(x);
    case UnaryKind::ln: return x < 0.0 ? kNaN : std::log(x);
    case UnaryKind::exp: return std::exp(x);
    case UnaryKind::sqrt: return x < 0.0 ? kNaN : std::sqrt(x);
    case UnaryKind::recip: return 1.0 / x;
    case UnaryKind::pow_int: return std::pow(x, param_);
    case UnaryKind::scale: return param_ * x;
    case UnaryKind::add_const: return x + param_;
    case UnaryKind::sigmoid: return sigmoid_value(x);
    case UnaryKind::tanh: return std::tanh(x);
  }
  return kNaN;
}

double UnaryFn::condition_number(double x) const noexcept {
  if (std::isnan(x)) return kNaN;
  switch (kind_) {
    case UnaryKind::sin: {
      if (x == 0.0) return 1.0;
      const double s = std::sin(x);
      return s == 0.0 ? kInf : std::fabs(x * std::cos(x) / s);
    }
    case UnaryKind::cos: return std::fabs(x * std::tan(x));
    case UnaryKind::tan: {
      if (x == 0.0) return 1.0;
      const double s2 = std::sin(2.0 * x);
      return s2 == 0.0 ? kInf : std::fabs(2.0 * x / s2);
    }
    case UnaryKind::asin: {
      if (std::fabs(x) > 1.0) return kNaN;
      if (x == 0.0) return 1.0;
      const double root = std::sqrt((1.0 - x) * (1.0 + x));
      return root == 0.0 ? kInf : std::fabs(x / (root * std::asin(x)));
    }
    case UnaryKind::acos: {
      if (std::fabs(x) > 1.0) return kNaN;
      const double root = std::sqrt((1.0 - x) * (1.0 + x));
      const double denom = root * std::acos(x);
      return denom == 0.0 ? kInf : std::fabs(x / denom);
    }
    case UnaryKind::atan: {
      if (x == 0.0) return 1.0;
      return std::fabs(x / ((1.0 + x * x) * std::atan(x)));
    }
    case UnaryKind::ln: {
      if (x <= 0.0) return kNaN;
      const double l = std::log(x);
      return l == 0.0 ? kInf : std::fabs(1.0 / l);
    }
    case UnaryKind::exp: return std::fabs(x);
    case UnaryKind::sqrt: return x < 0.0 ? kNaN : 0.5;
    case UnaryKind::recip: return 1.0;
    case UnaryKind::pow_int: return std::fabs(param_);
    case UnaryKind::scale: return 1.0;
    case UnaryKind::add_const: {
      const double d = x + param_;
      return d == 0.0 ? (x == 0.0 ? 0.0 : kInf) : std::fabs(x / d);
    }
    case UnaryKind::sigmoid: return std::fabs(x * (1.0 - sigmoid_value(x)));
    case UnaryKind::tanh: {
      if (x == 0.0) return 1.0;
      const double t = std::tanh(x);
      return std::fabs(x * (1.0 - t * t) / t);
    }
  }
  return kNaN;
}

double UnaryFn::derivative(double x) const noexcept {
  switch (kind_) {
    case UnaryKind::sin: return std::cos(x);
    case UnaryKind::cos: return -std::sin(x);
    case UnaryKind::tan: { const double c = std::cos(x); return 1.0 / (c * c); }
    case UnaryKind::asin: return 1.0 / std::sqrt((1.0 - x) * (1.0 + x));
    case UnaryKind::acos: return -1.0 / std::sqrt((1.0 - x) * (1.0 + x));
    case UnaryKind::atan: return 1.0 / (1.0 + x * x);
    case UnaryKind::ln: return 1.0 / x;
    case UnaryKind::exp: return std::exp(x);
    case UnaryKind::sqrt: return 0.5 / std::sqrt(x);
    case UnaryKind::recip: return -1.0 / (x * x);
    case UnaryKind::pow_int: return param_ * std::pow(x, param_ - 1.0);
    case UnaryKind::scale: return param_;
    case UnaryKind::add_const: return 1.0;
    case UnaryKind::sigmoid: { const double s = sigmoid_value(x); return s * (1.0 - s); }
    case UnaryKind::tanh: { const double t = std::tanh(x); return 1.0 - t * t; }
  }
  return kNaN;
}

bool UnaryFn::is_exact_scaling() const noexcept {
  return kind_ == UnaryKind::scale && is_power_of_two(param_);
}

int UnaryFn::evaluation_ulps() const noexcept {
  if (is_exact_scaling()) return 0;
  return kind_ == UnaryKind::sigmoid ? 6 : 2;
}

std::string UnaryFn::name() const {
  switch (kind_) {
    case UnaryKind::sin: return "sin";
    case UnaryKind::cos: return "cos";
    case UnaryKind::tan: return "tan";
    case UnaryKind::asin: return "asin";
    case UnaryKind::acos: return "acos";
    case UnaryKind::atan: return "atan";
    case UnaryKind::ln: return "ln";
    case UnaryKind::exp: return "exp";
    case UnaryKind::sqrt: return "sqrt";
    case UnaryKind::recip: return "recip";
    case UnaryKind::pow_int: return "pow_int(" + std::to_string(static_cast<int>(param_)) + ")";
    case UnaryKind::scale: return "scale(" + std::to_string(param_) + ")";
    case UnaryKind::add_const: return "add_const(" + std::to_string(param_) + ")";
    case UnaryKind::sigmoid: return "sigmoid";
    case UnaryKind::tanh: return "tanh";
  }
  return "?";
}

namespace {

// True when f has a pole somewhere in [lo, hi].
bool pole_between(const UnaryFn& f, double lo, double hi) noexcept {
  switch (f.kind()) {
    case UnaryKind::recip: return lo <= 0.0 && hi >= 0.0;
    case UnaryKind::pow_int: return f.parameter() < 0.0 && lo <= 0.0 && hi >= 0.0;
    case UnaryKind::tan: {
      constexpr double pi = std::numbers::pi;
      return std::floor((lo - pi / 2) / pi) != std::floor((hi - pi / 2) / pi);
    }
    default: return false;
  }
}

// Nearest point of the domain of f.
double clamp_to_domain(const UnaryFn& f, double t) noexcept {
  switch (f.kind()) {
    case UnaryKind::asin:
    case UnaryKind::acos: return std::clamp(t, -1.0, 1.0);
    case UnaryKind::ln:
    case UnaryKind::sqrt: return std::max(t, 0.0);
    default: return t;
  }
}

}  // namespace

XScalar apply_unary(const UnaryFn& f, const XScalar& x) noexcept {
  const FloatFormat fmt = x.format();
  const double y = round_to_format(f.evaluate(x.value()), fmt);
  if (!std::isfinite(y)) return XScalar::make(y, 0, fmt);
  const double c = f.condition_number(x.value());
  if (!std::isfinite(c)) return XScalar::make(y, 0, fmt);
  double delta = 0.0;
  const double dx = operand_delta(x);
  if (dx > 0.0) {
    const double lo = x.value() - dx;
    const double hi = x.value() + dx;
    if (pole_between(f, lo, hi)) return XScalar::make(y, 0, fmt);
    // Relative error times C, and the endpoint images for curvature the
    // linear term misses on wide intervals.
    delta = c * (dx / std::fabs(x.value())) * std::fabs(y);
    for (double t : {lo, hi}) delta = std::max(delta, std::fabs(f.evaluate(clamp_to_domain(f, t)) - y));
  }
  delta += f.evaluation_ulps() * 2.0 * half_ulp(y, fmt);
  return XScalar::make(y, bits_from_delta(y, delta, fmt), fmt);
}

}  // namespace preciseum
