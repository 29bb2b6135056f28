#pragma once

#include <cstddef>
#include <optional>

#include "preciseum/xarray.hpp"

namespace preciseum {

/// Reductions fold each output element over the reduced axis in increasing
/// index order. The inaccuracy of a sum or product is estimated once for
/// the whole fold rather than after every pairwise step. A missing axis
/// reduces over all elements and yields a rank-0 array.
///
/// Invalid axes throw RangeError. Empty sums and products return the
/// identity with full bits; empty min/max/mean throw ShapeError.
XArray sum_reduce(const XArray& a, std::optional<std::size_t> axis = std::nullopt,
                  Parallelism par = {});
XArray prod_reduce(const XArray& a, std::optional<std::size_t> axis = std::nullopt,
                   Parallelism par = {});
XArray min_reduce(const XArray& a, std::optional<std::size_t> axis = std::nullopt,
                  Parallelism par = {});
XArray max_reduce(const XArray& a, std::optional<std::size_t> axis = std::nullopt,
                  Parallelism par = {});
XArray mean(const XArray& a, std::optional<std::size_t> axis = std::nullopt,
            Parallelism par = {});

/// Atomic sum of a sequence of scalars (the kernel behind sum_reduce):
/// delta = sum of operand deltas + (inexact steps) * half_ulp(max |partial|).
XScalar atomic_sum(std::span<const XScalar> terms, FloatFormat format = FloatFormat::binary64);

/// Atomic product: relative bounds multiply, (1 + d_i) and one rounding
/// factor per inexact step.
XScalar atomic_product(std::span<const XScalar> terms, FloatFormat format = FloatFormat::binary64);

/// Dot product of two rank-1 arrays. The value is a fixed-order fused
/// multiply-accumulate; precision comes from the V2 matmul estimator on the
/// 1 x n by n x 1 product. Empty vectors give exact 0.
XScalar dot(const XArray& a, const XArray& b);

}  // namespace preciseum
