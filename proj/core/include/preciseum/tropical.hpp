#pragma once

#include <cstddef>
#include <vector>

#include "preciseum/xarray.hpp"

namespace preciseum {

/// Stored stand-in for an exactly known entry (inaccuracy 2^-inf = 0).
inline constexpr double kExactExponent = -16384.0;
/// Stored stand-in for NaN/Inf entries (inaccuracy +inf).
inline constexpr double kUnboundedExponent = 16384.0;

inline bool is_exact_exponent(double e) noexcept { return e <= kExactExponent; }
inline bool is_unbounded_exponent(double e) noexcept { return e >= kUnboundedExponent; }

/// Dense row-major matrix of reals. Used for per-element log2 quantities:
/// inaccuracy exponents, log2 magnitudes and estimator outputs.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Per-element inaccuracy exponent of a rank-2 array: e - bits for finite
/// nonzero entries short of full bits, kExactExponent for zeros and
/// full-bit entries, kUnboundedExponent for NaN/Inf.
Matrix inaccuracy_exponents(const XArray& a);

/// log2|a_ij|, kExactExponent for zeros, kUnboundedExponent for NaN/Inf.
Matrix log2_magnitudes(const XArray& a);

/// Saturating tropical product: exact absorbs, then unbounded dominates.
double tropical_times(double x, double y) noexcept;

/// out_ij = max_l (X_il + Y_lj) in the (max, +) semiring, with
/// kExactExponent as the additive identity. Plain O(m n k) loop.
Matrix tropical_matmul(const Matrix& x, const Matrix& y);

/// Exact (not mean-relaxed) mixed bound:
/// out_ij = max_l max(log2|A_il| + Bexp_lj, Aexp_il + log2|B_lj|).
Matrix mixed_tropical(const XArray& a, const Matrix& a_exp, const XArray& b, const Matrix& b_exp);

}  // namespace preciseum
