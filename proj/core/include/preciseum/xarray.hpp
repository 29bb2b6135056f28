#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "preciseum/parallel.hpp"
#include "preciseum/unary.hpp"
#include "preciseum/xscalar.hpp"

namespace preciseum {

using Shape = std::vector<std::size_t>;

inline constexpr std::size_t kMaxRank = 8;

std::size_t element_count(const Shape& shape) noexcept;

/// Right-aligned broadcast of two shapes; throws ShapeError when some aligned
/// pair differs and neither extent is 1.
Shape broadcast_shape(const Shape& a, const Shape& b);

/// Dense row-major array of extended floats: parallel value and exact-bit
/// buffers plus a shape. Immutable after construction.
class XArray {
 public:
  /// Rank-0 array holding exact 0.0.
  XArray();

  /// Validates sizes, rank and bit ranges (RangeError / ShapeError) and
  /// applies the special-value rules to every element.
  XArray(Shape shape, std::vector<double> values, std::vector<std::uint8_t> bits,
         FloatFormat format = FloatFormat::binary64);

  /// Every value exact (full bits), after rounding to the format.
  static XArray from_exact(Shape shape, std::vector<double> values,
                           FloatFormat format = FloatFormat::binary64);
  static XArray from_scalars(Shape shape, std::span<const XScalar> elements);
  static XArray filled(Shape shape, const XScalar& element);
  static XArray scalar(const XScalar& element);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  FloatFormat format() const noexcept { return format_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  XScalar at(std::size_t flat) const;
  /// Element at a 2-d index (row, col).
  XScalar at(std::size_t row, std::size_t col) const;

  XArray reshape(Shape shape) const;
  /// Transpose of a rank-2 array.
  XArray transpose() const;

  friend bool operator==(const XArray&, const XArray&) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
  std::vector<std::uint8_t> bits_;
  FloatFormat format_ = FloatFormat::binary64;
};

/// Same shape, format, bit counts and bit-identical values (NaN payloads and
/// signed zeros included), unlike operator== which follows IEEE comparison.
bool identical(const XArray& a, const XArray& b) noexcept;

enum class BinaryOp : std::uint8_t { add, sub, mul, div, min, max };

XScalar apply_binary(BinaryOp op, const XScalar& x, const XScalar& y);

/// Elementwise precision-tracked binary op with broadcasting.
XArray map_binary(BinaryOp op, const XArray& a, const XArray& b, Parallelism par = {});

/// Elementwise apply_unary.
XArray map_unary(const UnaryFn& f, const XArray& a, Parallelism par = {});

/// Elementwise round_op.
XArray map_round(RoundMode mode, const XArray& a);

}  // namespace preciseum
