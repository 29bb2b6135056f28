#include "preciseum/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "preciseum/matmul.hpp"

namespace preciseum {

namespace {

double two_sum_error(double a, double b, double s) noexcept {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

// Layout of a reduction: `outer` blocks of `extent` reduced elements, each
// element separated by `inner` (also the number of outputs per block).
struct ReductionPlan {
  Shape out_shape;
  std::size_t outer = 1;
  std::size_t extent = 0;
  std::size_t inner = 1;
};

ReductionPlan plan(const XArray& a, std::optional<std::size_t> axis) {
  ReductionPlan p;
  if (!axis) {
    p.extent = a.size();
    return p;
  }
  if (*axis >= a.rank()) {
    throw RangeError("reduction axis " + std::to_string(*axis) + " out of range for rank " +
                     std::to_string(a.rank()));
  }
  const auto& shape = a.shape();
  for (std::size_t k = 0; k < *axis; ++k) p.outer *= shape[k];
  for (std::size_t k = *axis + 1; k < shape.size(); ++k) p.inner *= shape[k];
  p.extent = shape[*axis];
  p.out_shape = shape;
  p.out_shape.erase(p.out_shape.begin() + static_cast<std::ptrdiff_t>(*axis));
  return p;
}

template <class Fold>
XArray reduce_with(const XArray& a, std::optional<std::size_t> axis, Parallelism par, Fold fold) {
  const ReductionPlan p = plan(a, axis);
  const std::size_t n_out = p.outer * p.inner;
  std::vector<double> values(n_out);
  std::vector<std::uint8_t> bits(n_out);
  detail::parallel_for(n_out, par, [&](std::size_t begin, std::size_t end) {
    std::vector<XScalar> lane(p.extent);
    for (std::size_t o = begin; o < end; ++o) {
      const std::size_t block = o / p.inner;
      const std::size_t offset = o % p.inner;
      for (std::size_t j = 0; j < p.extent; ++j) {
        lane[j] = a.at(block * p.extent * p.inner + j * p.inner + offset);
      }
      const XScalar r = fold(std::span<const XScalar>(lane), a.format());
      values[o] = r.value();
      bits[o] = static_cast<std::uint8_t>(r.exact_bits());
    }
  });
  return XArray(p.out_shape, std::move(values), std::move(bits), a.format());
}

XScalar fold_extremum(std::span<const XScalar> terms, bool take_min) {
  XScalar acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) {
    acc = take_min ? min_op(acc, terms[i]) : max_op(acc, terms[i]);
  }
  return acc;
}

void require_nonempty(const XArray& a, std::optional<std::size_t> axis, const char* what) {
  const std::size_t extent = axis ? (*axis < a.rank() ? a.shape()[*axis] : 1) : a.size();
  if (extent == 0) throw ShapeError(std::string(what) + " over an empty axis");
}

}  // namespace

XScalar atomic_sum(std::span<const XScalar> terms, FloatFormat format) {
  double sum = 0.0;
  double delta = 0.0;
  double max_partial = 0.0;
  std::size_t inexact_steps = 0;
  for (const auto& t : terms) {
    const double raw = sum + t.value();
    const double err = std::isfinite(raw) ? two_sum_error(sum, t.value(), raw) : 0.0;
    const double rounded = round_to_format(raw, format);
    if (err != 0.0 || rounded != raw) ++inexact_steps;
    sum = rounded;
    delta += operand_delta(t);
    max_partial = std::max(max_partial, std::fabs(sum));
  }
  if (!std::isfinite(sum)) return XScalar::make(sum, 0, format);
  if (inexact_steps != 0) {
    delta += static_cast<double>(inexact_steps) * half_ulp(max_partial, format);
  }
  return XScalar::make(sum, bits_from_delta(sum, delta, format), format);
}

XScalar atomic_product(std::span<const XScalar> terms, FloatFormat format) {
  double product = 1.0;
  double growth = 1.0;
  const double unit = std::ldexp(1.0, -mantissa_bits(format));
  for (const auto& t : terms) {
    const double raw = product * t.value();
    const bool inexact =
        std::isfinite(raw) && (std::fma(product, t.value(), -raw) != 0.0 || round_to_format(raw, format) != raw);
    product = round_to_format(raw, format);
    const double v = std::fabs(t.value());
    if (v != 0.0 && std::isfinite(v)) growth *= 1.0 + operand_delta(t) / v;
    if (inexact) growth *= 1.0 + unit;
  }
  if (!std::isfinite(product)) return XScalar::make(product, 0, format);
  const double delta = std::fabs(product) * (growth - 1.0);
  return XScalar::make(product, bits_from_delta(product, delta, format), format);
}

XArray sum_reduce(const XArray& a, std::optional<std::size_t> axis, Parallelism par) {
  return reduce_with(a, axis, par, atomic_sum);
}

XArray prod_reduce(const XArray& a, std::optional<std::size_t> axis, Parallelism par) {
  return reduce_with(a, axis, par, atomic_product);
}

XArray min_reduce(const XArray& a, std::optional<std::size_t> axis, Parallelism par) {
  require_nonempty(a, axis, "min_reduce");
  return reduce_with(a, axis, par, [](std::span<const XScalar> t, FloatFormat) {
    return fold_extremum(t, true);
  });
}

XArray max_reduce(const XArray& a, std::optional<std::size_t> axis, Parallelism par) {
  require_nonempty(a, axis, "max_reduce");
  return reduce_with(a, axis, par, [](std::span<const XScalar> t, FloatFormat) {
    return fold_extremum(t, false);
  });
}

XArray mean(const XArray& a, std::optional<std::size_t> axis, Parallelism par) {
  require_nonempty(a, axis, "mean");
  return reduce_with(a, axis, par, [](std::span<const XScalar> t, FloatFormat f) {
    const XScalar count = XScalar::from_exact(static_cast<double>(t.size()), f);
    return div(atomic_sum(t, f), count);
  });
}

XScalar dot(const XArray& a, const XArray& b) {
  if (a.rank() != 1 || b.rank() != 1) throw ShapeError("dot needs rank-1 arrays");
  if (a.size() != b.size()) throw ShapeError("dot of vectors with different lengths");
  if (a.format() != b.format()) throw FormatMismatchError("arrays use different float formats");
  if (a.size() == 0) return XScalar::from_exact(0.0, a.format());
  const XArray c = matmul(a.reshape({1, a.size()}), b.reshape({b.size(), 1}), Estimator::v2());
  return c.at(0);
}

}  // namespace preciseum
