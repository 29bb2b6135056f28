#pragma once

#include <cstdint>

#include "preciseum/tropical.hpp"
#include "preciseum/xarray.hpp"

namespace preciseum {

/// Which lower bound on the inaccuracy exponents of a product to use.
struct Estimator {
  enum class Kind : std::uint8_t { v1, v2, holder };
  Kind kind = Kind::v2;
  /// Hölder order; 0 selects it automatically.
  double p = 1.0;

  static Estimator v1() noexcept { return {Kind::v1, 1.0}; }
  static Estimator v2() noexcept { return {Kind::v2, 1.0}; }
  static Estimator holder(double p) noexcept { return {Kind::holder, p}; }
  static Estimator holder_auto() noexcept { return {Kind::holder, 0.0}; }
};

/// Candidate Hölder orders tried by automatic selection.
inline constexpr int kHolderOrders[] = {1, 2, 4, 8, 16, 32};

/// log2((2^Aexp . 2^Bexp)_ij) - log2 n: the arithmetic mean of the n terms
/// 2^(a_l + b_l) never exceeds their maximum.
Matrix estimate_v1(const Matrix& a_exp, const Matrix& b_exp);

/// log2(max((|A| . 2^Bexp)_ij, (2^Aexp . |B|)_ij)) - log2 n.
Matrix estimate_v2(const XArray& a, const Matrix& a_exp, const XArray& b, const Matrix& b_exp);

/// (1/p) (log2(max((|A|^p . 2^(p Bexp))_ij, (2^(p Aexp) . |B|^p)_ij)) - log2 n),
/// a power mean of order p. Throws RangeError for p < 1.
Matrix estimate_holder(const XArray& a, const Matrix& a_exp, const XArray& b, const Matrix& b_exp,
                       double p);

/// Largest p in kHolderOrders with p * (M + log2 n + 4) < 1020, where M is
/// the largest magnitude among the value exponents of A and B and the finite
/// inaccuracy exponents. Falls back to 1.
int auto_holder_order(const XArray& a, const Matrix& a_exp, const XArray& b, const Matrix& b_exp);

/// Estimator output plus diagnostics about the power sums behind it.
struct HolderReport {
  Matrix estimate;
  double p = 1.0;
  /// True when every power sum and every power-of-two factor was finite.
  bool intermediates_finite = true;
};

/// p = 0 selects the order with auto_holder_order.
HolderReport estimate_holder_report(const XArray& a, const Matrix& a_exp, const XArray& b,
                                    const Matrix& b_exp, double p);

/// Run the selected estimator on A (m x n) and B (n x k).
Matrix estimate(const XArray& a, const XArray& b, Estimator est);

/// Ordinary product of the values, accumulated with fused multiply-adds in
/// increasing inner index for every output element.
std::vector<double> matmul_values(const XArray& a, const XArray& b, Parallelism par = {});

/// Product with exact-bit tracking. The estimator gives a lower bound on
/// each output's inaccuracy exponent; it is combined by max with the
/// accumulation rounding term log2(k * half_ulp(C_ij)), where k <= n counts
/// the accumulation steps that may have rounded, and
/// bits_ij = clamp(ceil(e(C_ij) - bound_ij), 0, mantissa_bits).
/// Throws ShapeError on rank or inner-dimension mismatch.
XArray matmul(const XArray& a, const XArray& b, Estimator est = Estimator::v2(),
              Parallelism par = {});

}  // namespace preciseum
