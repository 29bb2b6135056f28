#include "preciseum/xarray.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <utility>

namespace preciseum {

namespace {

constexpr std::size_t kMaxExtent = std::size_t{1} << 48;

void validate_shape(const Shape& shape) {
  if (shape.size() > kMaxRank) throw ShapeError("rank exceeds 8");
  for (auto extent : shape) {
    if (extent > kMaxExtent) throw ShapeError("extent exceeds 2^48");
  }
}

// Row-major strides of `shape` as seen through a broadcast to `out` (0 for
// stretched or missing dimensions).
std::vector<std::size_t> broadcast_strides(const Shape& shape, const Shape& out) {
  std::vector<std::size_t> strides(out.size(), 0);
  std::size_t stride = 1;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    const std::size_t src = shape.size() - 1 - k;
    const std::size_t dst = out.size() - 1 - k;
    strides[dst] = shape[src] == 1 ? 0 : stride;
    stride *= shape[src];
  }
  return strides;
}

}  // namespace

std::size_t element_count(const Shape& shape) noexcept {
  std::size_t n = 1;
  for (auto extent : shape) n *= extent;
  return n;
}

Shape broadcast_shape(const Shape& a, const Shape& b) {
  const std::size_t rank = std::max(a.size(), b.size());
  Shape out(rank, 1);
  for (std::size_t k = 0; k < rank; ++k) {
    const std::size_t ea = k < a.size() ? a[a.size() - 1 - k] : 1;
    const std::size_t eb = k < b.size() ? b[b.size() - 1 - k] : 1;
    if (ea != eb && ea != 1 && eb != 1) {
      throw ShapeError("shapes are not broadcast-compatible (extents " + std::to_string(ea) +
                       " and " + std::to_string(eb) + ")");
    }
    out[rank - 1 - k] = ea == 1 ? eb : ea;
  }
  return out;
}

XArray::XArray() : shape_{}, values_{0.0}, bits_{53} {}

XArray::XArray(Shape shape, std::vector<double> values, std::vector<std::uint8_t> bits,
               FloatFormat format)
    : shape_(std::move(shape)), values_(std::move(values)), bits_(std::move(bits)), format_(format) {
  validate_shape(shape_);
  const std::size_t n = element_count(shape_);
  if (values_.size() != n || bits_.size() != n) {
    throw ShapeError("buffer sizes do not match the shape");
  }
  const int m = mantissa_bits(format_);
  for (std::size_t i = 0; i < n; ++i) {
    if (bits_[i] > m) throw RangeError("exact bit count out of range for format");
    const XScalar x = XScalar::make(round_to_format(values_[i], format_), bits_[i], format_);
    values_[i] = x.value();
    bits_[i] = static_cast<std::uint8_t>(x.exact_bits());
  }
}

XArray XArray::from_exact(Shape shape, std::vector<double> values, FloatFormat format) {
  std::vector<std::uint8_t> bits(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const XScalar x = XScalar::from_exact(values[i], format);
    values[i] = x.value();
    bits[i] = static_cast<std::uint8_t>(x.exact_bits());
  }
  return XArray(std::move(shape), std::move(values), std::move(bits), format);
}

XArray XArray::from_scalars(Shape shape, std::span<const XScalar> elements) {
  const FloatFormat format = elements.empty() ? FloatFormat::binary64 : elements.front().format();
  std::vector<double> values;
  std::vector<std::uint8_t> bits;
  values.reserve(elements.size());
  bits.reserve(elements.size());
  for (const auto& x : elements) {
    if (x.format() != format) throw FormatMismatchError("elements use different float formats");
    values.push_back(x.value());
    bits.push_back(static_cast<std::uint8_t>(x.exact_bits()));
  }
  return XArray(std::move(shape), std::move(values), std::move(bits), format);
}

XArray XArray::filled(Shape shape, const XScalar& element) {
  const std::size_t n = element_count(shape);
  return XArray(std::move(shape), std::vector<double>(n, element.value()),
                std::vector<std::uint8_t>(n, static_cast<std::uint8_t>(element.exact_bits())),
                element.format());
}

XArray XArray::scalar(const XScalar& element) { return filled(Shape{}, element); }

XScalar XArray::at(std::size_t flat) const {
  if (flat >= values_.size()) throw ShapeError("flat index out of range");
  return XScalar::make(values_[flat], bits_[flat], format_);
}

XScalar XArray::at(std::size_t row, std::size_t col) const {
  if (rank() != 2 || row >= shape_[0] || col >= shape_[1]) throw ShapeError("2-d index out of range");
  return at(row * shape_[1] + col);
}

XArray XArray::reshape(Shape shape) const {
  if (element_count(shape) != size()) throw ShapeError("reshape changes the element count");
  return XArray(std::move(shape), values_, bits_, format_);
}

bool identical(const XArray& a, const XArray& b) noexcept {
  if (a.shape() != b.shape() || a.format() != b.format() || a.size() != b.size()) return false;
  if (!std::equal(a.bits().begin(), a.bits().end(), b.bits().begin())) return false;
  return a.size() == 0 || std::memcmp(a.values().data(), b.values().data(), a.size() * sizeof(double)) == 0;
}

XArray XArray::transpose() const {
  if (rank() != 2) throw ShapeError("transpose needs a rank-2 array");
  const std::size_t rows = shape_[0];
  const std::size_t cols = shape_[1];
  std::vector<double> values(size());
  std::vector<std::uint8_t> bits(size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      values[j * rows + i] = values_[i * cols + j];
      bits[j * rows + i] = bits_[i * cols + j];
    }
  }
  return XArray(Shape{cols, rows}, std::move(values), std::move(bits), format_);
}

XScalar apply_binary(BinaryOp op, const XScalar& x, const XScalar& y) {
  switch (op) {
    case BinaryOp::add: return add(x, y);
    case BinaryOp::sub: return sub(x, y);
    case BinaryOp::mul: return mul(x, y);
    case BinaryOp::div: return div(x, y);
    case BinaryOp::min: return min_op(x, y);
    case BinaryOp::max: return max_op(x, y);
  }
  return add(x, y);
}

XArray map_binary(BinaryOp op, const XArray& a, const XArray& b, Parallelism par) {
  if (a.format() != b.format()) throw FormatMismatchError("arrays use different float formats");
  const Shape out = broadcast_shape(a.shape(), b.shape());
  const auto sa = broadcast_strides(a.shape(), out);
  const auto sb = broadcast_strides(b.shape(), out);
  const std::size_t n = element_count(out);
  const FloatFormat f = a.format();
  std::vector<double> values(n);
  std::vector<std::uint8_t> bits(n);
  detail::parallel_for(n, par, [&](std::size_t begin, std::size_t end) {
    for (std::size_t flat = begin; flat < end; ++flat) {
      std::size_t rem = flat;
      std::size_t ia = 0;
      std::size_t ib = 0;
      for (std::size_t k = out.size(); k-- > 0;) {
        const std::size_t idx = rem % out[k];
        rem /= out[k];
        ia += idx * sa[k];
        ib += idx * sb[k];
      }
      const XScalar r = apply_binary(op, XScalar::make(a.values()[ia], a.bits()[ia], f),
                                     XScalar::make(b.values()[ib], b.bits()[ib], f));
      values[flat] = r.value();
      bits[flat] = static_cast<std::uint8_t>(r.exact_bits());
    }
  });
  return XArray(out, std::move(values), std::move(bits), f);
}

XArray map_unary(const UnaryFn& fn, const XArray& a, Parallelism par) {
  const std::size_t n = a.size();
  std::vector<double> values(n);
  std::vector<std::uint8_t> bits(n);
  detail::parallel_for(n, par, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const XScalar r = apply_unary(fn, XScalar::make(a.values()[i], a.bits()[i], a.format()));
      values[i] = r.value();
      bits[i] = static_cast<std::uint8_t>(r.exact_bits());
    }
  });
  return XArray(a.shape(), std::move(values), std::move(bits), a.format());
}

XArray map_round(RoundMode mode, const XArray& a) {
  std::vector<double> values(a.size());
  std::vector<std::uint8_t> bits(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const XScalar r = round_op(mode, a.at(i));
    values[i] = r.value();
    bits[i] = static_cast<std::uint8_t>(r.exact_bits());
  }
  return XArray(a.shape(), std::move(values), std::move(bits), a.format());
}

}  // namespace preciseum
