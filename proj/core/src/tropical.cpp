#include "preciseum/tropical.hpp"

#include <algorithm>
#include <cmath>

namespace preciseum {

namespace {

void require_matrix(const XArray& a) {
  if (a.rank() != 2) throw ShapeError("expected a rank-2 array");
}

void require_product_shapes(std::size_t inner_left, std::size_t inner_right) {
  if (inner_left != inner_right) throw ShapeError("inner dimensions differ");
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw ShapeError("matrix buffer does not match its shape");
}

Matrix inaccuracy_exponents(const XArray& a) {
  require_matrix(a);
  Matrix out(a.shape()[0], a.shape()[1]);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) {
      const XScalar x = a.at(i, j);
      if (!x.is_finite()) out(i, j) = kUnboundedExponent;
      else if (x.value() == 0.0 || x.is_full()) out(i, j) = kExactExponent;
      else out(i, j) = static_cast<double>(binary_exponent(x.value()) - x.exact_bits());
    }
  }
  return out;
}

Matrix log2_magnitudes(const XArray& a) {
  require_matrix(a);
  Matrix out(a.shape()[0], a.shape()[1]);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) {
      const double v = a.values()[i * out.cols() + j];
      if (!std::isfinite(v)) out(i, j) = kUnboundedExponent;
      else if (v == 0.0) out(i, j) = kExactExponent;
      else out(i, j) = std::log2(std::fabs(v));
    }
  }
  return out;
}

double tropical_times(double x, double y) noexcept {
  if (is_exact_exponent(x) || is_exact_exponent(y)) return kExactExponent;
  if (is_unbounded_exponent(x) || is_unbounded_exponent(y)) return kUnboundedExponent;
  return x + y;
}

Matrix tropical_matmul(const Matrix& x, const Matrix& y) {
  require_product_shapes(x.cols(), y.rows());
  Matrix out(x.rows(), y.cols(), kExactExponent);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < y.cols(); ++j) {
      double best = kExactExponent;
      for (std::size_t l = 0; l < x.cols(); ++l) best = std::max(best, tropical_times(x(i, l), y(l, j)));
      out(i, j) = best;
    }
  }
  return out;
}

Matrix mixed_tropical(const XArray& a, const Matrix& a_exp, const XArray& b, const Matrix& b_exp) {
  const Matrix log_a = log2_magnitudes(a);
  const Matrix log_b = log2_magnitudes(b);
  require_product_shapes(log_a.cols(), log_b.rows());
  if (a_exp.rows() != log_a.rows() || a_exp.cols() != log_a.cols() ||
      b_exp.rows() != log_b.rows() || b_exp.cols() != log_b.cols()) {
    throw ShapeError("exponent matrices do not match the value matrices");
  }
  Matrix out(log_a.rows(), log_b.cols(), kExactExponent);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) {
      double best = kExactExponent;
      for (std::size_t l = 0; l < log_a.cols(); ++l) {
        best = std::max(best, tropical_times(log_a(i, l), b_exp(l, j)));
        best = std::max(best, tropical_times(a_exp(i, l), log_b(l, j)));
      }
      out(i, j) = best;
    }
  }
  return out;
}

}  // namespace preciseum
