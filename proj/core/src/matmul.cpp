#include "preciseum/matmul.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace preciseum {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Matrix entries split as mantissa * 2^exponent with mantissa in [1, 2), so
// that row/column shifts by whole powers of two are exact.
struct SplitMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> mant;     // 0 for entries contributing nothing
  std::vector<int> exponent;
  std::vector<char> unbounded;  // NaN/Inf values or unbounded inaccuracies

  SplitMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), mant(r * c, 0.0), exponent(r * c, 0), unbounded(r * c, 0) {}
};

SplitMatrix split_values(const XArray& a) {
  SplitMatrix s(a.shape()[0], a.shape()[1]);
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    const double v = a.values()[idx];
    if (!std::isfinite(v)) {
      s.unbounded[idx] = 1;
    } else if (v != 0.0) {
      s.exponent[idx] = binary_exponent(v);
      s.mant[idx] = std::ldexp(std::fabs(v), -s.exponent[idx]);
    }
  }
  return s;
}

SplitMatrix split_exponents(const Matrix& m) {
  SplitMatrix s(m.rows(), m.cols());
  for (std::size_t idx = 0; idx < m.data().size(); ++idx) {
    const double x = m.data()[idx];
    if (is_unbounded_exponent(x) || std::isnan(x)) {
      s.unbounded[idx] = 1;
    } else if (!is_exact_exponent(x)) {
      const double fl = std::floor(x);
      s.exponent[idx] = static_cast<int>(fl);
      s.mant[idx] = std::exp2(x - fl);
    }
  }
  return s;
}

struct PowerSums {
  Matrix log2_sum;  // log2 of sum_l L_il^p R_lj^p, with sentinels
  bool finite = true;
};

// log2(sum_l (L_il R_lj)^p) for every (i, j). Each output is shifted by its
// largest term exponent max_l (e(L_il) + e(R_lj)) before exponentiation, so
// every term lies in [0, 4^p] and only terms below 2^-1100 of the largest
// one are dropped (which keeps the result a lower bound).
PowerSums power_sums(const SplitMatrix& left, const SplitMatrix& right, double p) {
  const std::size_t m = left.rows;
  const std::size_t n = left.cols;
  const std::size_t k = right.cols;
  PowerSums out{Matrix(m, k, kExactExponent), true};
  const bool integral = p == std::trunc(p) && p <= 64.0;
  const int ip = integral ? static_cast<int>(p) : 0;
  // 2^-q for q in [0, 1100], the only scales an integral order needs.
  static const std::vector<double> kDownScale = [] {
    std::vector<double> t(1101);
    for (int q = 0; q <= 1100; ++q) t[static_cast<std::size_t>(q)] = std::ldexp(1.0, -q);
    return t;
  }();

  std::vector<char> row_bad(m, 0);
  std::vector<double> lp(m * n);
  for (std::size_t idx = 0; idx < m * n; ++idx) {
    if (left.unbounded[idx]) row_bad[idx / n] = 1;
    lp[idx] = left.mant[idx] == 0.0 ? 0.0 : std::pow(left.mant[idx], p);
  }
  // Stored transposed so the inner loop is contiguous on both sides.
  std::vector<char> col_bad(k, 0);
  std::vector<double> rp_t(k * n);
  std::vector<int> re_t(k * n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t idx = l * k + j;
      if (right.unbounded[idx]) col_bad[j] = 1;
      rp_t[j * n + l] = right.mant[idx] == 0.0 ? 0.0 : std::pow(right.mant[idx], p);
      re_t[j * n + l] = right.exponent[idx];
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    const double* lrow = lp.data() + i * n;
    const int* lexp = left.exponent.data() + i * n;
    for (std::size_t j = 0; j < k; ++j) {
      if (row_bad[i] || col_bad[j]) {
        out.log2_sum(i, j) = kUnboundedExponent;
        continue;
      }
      const double* rcol = rp_t.data() + j * n;
      const int* rexp = re_t.data() + j * n;
      int shift = std::numeric_limits<int>::min();
      for (std::size_t l = 0; l < n; ++l) {
        if (lrow[l] != 0.0 && rcol[l] != 0.0) shift = std::max(shift, lexp[l] + rexp[l]);
      }
      if (shift == std::numeric_limits<int>::min()) continue;
      double sum = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        if (lrow[l] == 0.0 || rcol[l] == 0.0) continue;
        const int drop = lexp[l] + rexp[l] - shift;
        if (static_cast<double>(drop) * p < -1100.0) continue;
        const double scale =
            integral ? kDownScale[static_cast<std::size_t>(-drop * ip)] : std::exp2(p * drop);
        sum += lrow[l] * rcol[l] * scale;
      }
      if (!std::isfinite(sum)) out.finite = false;
      out.log2_sum(i, j) = p * static_cast<double>(shift) + std::log2(sum);
    }
  }
  return out;
}

void require_shapes(const XArray& a, const Matrix& a_exp, const XArray& b, const Matrix& b_exp) {
  if (a.rank() != 2 || b.rank() != 2) throw ShapeError("matmul needs rank-2 arrays");
  if (a.shape()[1] != b.shape()[0]) {
    throw ShapeError("matmul inner dimensions differ: " + std::to_string(a.shape()[1]) + " vs " +
                     std::to_string(b.shape()[0]));
  }
  if (a_exp.rows() != a.shape()[0] || a_exp.cols() != a.shape()[1] || b_exp.rows() != b.shape()[0] ||
      b_exp.cols() != b.shape()[1]) {
    throw ShapeError("exponent matrices do not match the value matrices");
  }
}

double mean_correction(std::size_t n) { return std::log2(static_cast<double>(n)); }

// Steps of the fused accumulation of C_ij that may have rounded. A step is
// counted unless both the product and the running sum are provably exact
// (zero product residual and zero TwoSum error); the final narrowing to the
// storage format counts as one more step when it changes the value.
std::size_t inexact_steps(const XArray& a, const XArray& b, std::size_t i, std::size_t j) {
  const std::size_t n = a.shape()[1];
  const std::size_t k = b.shape()[1];
  double acc = 0.0;
  std::size_t steps = 0;
  for (std::size_t l = 0; l < n; ++l) {
    const double x = a.values()[i * n + l];
    const double y = b.values()[l * k + j];
    const double ph = x * y;
    bool exact = ph == 0.0 || (std::fabs(ph) >= 0x1p-960 && std::fma(x, y, -ph) == 0.0);
    const double s = acc + ph;
    const double bb = s - acc;
    exact = exact && (acc - (s - bb)) + (ph - bb) == 0.0;
    if (!exact) ++steps;
    acc = std::fma(x, y, acc);
  }
  if (round_to_format(acc, a.format()) != acc) ++steps;
  return steps;
}

}  // namespace

Matrix estimate_v1(const Matrix& a_exp, const Matrix& b_exp) {
  if (a_exp.cols() != b_exp.rows()) throw ShapeError("inner dimensions differ");
  Matrix est = power_sums(split_exponents(a_exp), split_exponents(b_exp), 1.0).log2_sum;
  const double correction = mean_correction(a_exp.cols());
  for (std::size_t i = 0; i < est.rows(); ++i) {
    for (std::size_t j = 0; j < est.cols(); ++j) {
      const double v = est(i, j);
      if (!is_exact_exponent(v) && !is_unbounded_exponent(v)) est(i, j) = v - correction;
    }
  }
  return est;
}

HolderReport estimate_holder_report(const XArray& a, const Matrix& a_exp, const XArray& b,
                                    const Matrix& b_exp, double p) {
  require_shapes(a, a_exp, b, b_exp);
  if (p == 0.0) p = auto_holder_order(a, a_exp, b, b_exp);
  if (!(p >= 1.0)) throw RangeError("Holder order must be at least 1");
  const PowerSums values_left = power_sums(split_values(a), split_exponents(b_exp), p);
  const PowerSums values_right = power_sums(split_exponents(a_exp), split_values(b), p);
  const double correction = mean_correction(a.shape()[1]);
  HolderReport report{Matrix(a.shape()[0], b.shape()[1], kExactExponent), p,
                      values_left.finite && values_right.finite};
  for (std::size_t i = 0; i < report.estimate.rows(); ++i) {
    for (std::size_t j = 0; j < report.estimate.cols(); ++j) {
      const double s1 = values_left.log2_sum(i, j);
      const double s2 = values_right.log2_sum(i, j);
      if (is_unbounded_exponent(s1) || is_unbounded_exponent(s2)) {
        report.estimate(i, j) = kUnboundedExponent;
      } else if (is_exact_exponent(s1) && is_exact_exponent(s2)) {
        report.estimate(i, j) = kExactExponent;
      } else {
        const double top = is_exact_exponent(s1) ? s2 : is_exact_exponent(s2) ? s1 : std::max(s1, s2);
        report.estimate(i, j) = (top - correction) / p;
      }
    }
  }
  return report;
}

Matrix estimate_holder(const XArray& a, const Matrix& a_exp, const XArray& b, const Matrix& b_exp,
                       double p) {
  return estimate_holder_report(a, a_exp, b, b_exp, p).estimate;
}

Matrix estimate_v2(const XArray& a, const Matrix& a_exp, const XArray& b, const Matrix& b_exp) {
  return estimate_holder(a, a_exp, b, b_exp, 1.0);
}

int auto_holder_order(const XArray& a, const Matrix& a_exp, const XArray& b, const Matrix& b_exp) {
  require_shapes(a, a_exp, b, b_exp);
  double largest = 0.0;
  for (const XArray* arr : {&a, &b}) {
    for (double v : arr->values()) {
      if (std::isfinite(v) && v != 0.0) largest = std::max(largest, std::fabs(static_cast<double>(binary_exponent(v))));
    }
  }
  for (const Matrix* mat : {&a_exp, &b_exp}) {
    for (double e : mat->data()) {
      if (!is_exact_exponent(e) && !is_unbounded_exponent(e) && std::isfinite(e)) {
        largest = std::max(largest, std::fabs(e));
      }
    }
  }
  const double budget = largest + mean_correction(a.shape()[1]) + 4.0;
  int chosen = 1;
  for (int p : kHolderOrders) {
    if (static_cast<double>(p) * budget < 1020.0) chosen = p;
  }
  return chosen;
}

Matrix estimate(const XArray& a, const XArray& b, Estimator est) {
  const Matrix a_exp = inaccuracy_exponents(a);
  const Matrix b_exp = inaccuracy_exponents(b);
  require_shapes(a, a_exp, b, b_exp);
  switch (est.kind) {
    case Estimator::Kind::v1: return estimate_v1(a_exp, b_exp);
    case Estimator::Kind::v2: return estimate_v2(a, a_exp, b, b_exp);
    case Estimator::Kind::holder: {
      const double p = est.p == 0.0 ? auto_holder_order(a, a_exp, b, b_exp) : est.p;
      return estimate_holder(a, a_exp, b, b_exp, p);
    }
  }
  return estimate_v2(a, a_exp, b, b_exp);
}

std::vector<double> matmul_values(const XArray& a, const XArray& b, Parallelism par) {
  if (a.rank() != 2 || b.rank() != 2) throw ShapeError("matmul needs rank-2 arrays");
  const std::size_t m = a.shape()[0];
  const std::size_t n = a.shape()[1];
  const std::size_t k = b.shape()[1];
  if (b.shape()[0] != n) throw ShapeError("matmul inner dimensions differ");
  std::vector<double> bt(k * n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t j = 0; j < k; ++j) bt[j * n + l] = b.values()[l * k + j];
  }
  std::vector<double> c(m * k);
  const auto av = a.values();
  constexpr std::size_t kTile = 64;
  detail::parallel_for(m, par, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j0 = 0; j0 < k; j0 += kTile) {
      const std::size_t j1 = std::min(k, j0 + kTile);
      for (std::size_t i = begin; i < end; ++i) {
        const double* arow = av.data() + i * n;
        for (std::size_t j = j0; j < j1; ++j) {
          const double* bcol = bt.data() + j * n;
          double acc = 0.0;
          for (std::size_t l = 0; l < n; ++l) acc = std::fma(arow[l], bcol[l], acc);
          c[i * k + j] = round_to_format(acc, a.format());
        }
      }
    }
  });
  return c;
}

XArray matmul(const XArray& a, const XArray& b, Estimator est, Parallelism par) {
  if (a.format() != b.format()) throw FormatMismatchError("arrays use different float formats");
  if (a.rank() != 2 || b.rank() != 2) throw ShapeError("matmul needs rank-2 arrays");
  if (a.shape()[1] != b.shape()[0]) {
    throw ShapeError("matmul inner dimensions differ: " + std::to_string(a.shape()[1]) + " vs " +
                     std::to_string(b.shape()[0]));
  }
  if (a.shape()[1] == 0) throw ShapeError("matmul needs a nonzero inner dimension");
  const std::size_t m = a.shape()[0];
  const std::size_t n = a.shape()[1];
  const std::size_t k = b.shape()[1];
  const FloatFormat f = a.format();
  std::vector<double> values = matmul_values(a, b, par);
  const Matrix bound = estimate(a, b, est);
  const double accumulation = mean_correction(n);
  const int max_bits = mantissa_bits(f);
  std::vector<std::uint8_t> bits(m * k);
  for (std::size_t idx = 0; idx < m * k; ++idx) {
    const double v = values[idx];
    const double lower = bound.data()[idx];
    int b_out = 0;
    if (!std::isfinite(v) || is_unbounded_exponent(lower)) {
      b_out = 0;
    } else if (v == 0.0) {
      b_out = max_bits;
    } else {
      // Counting the rounded steps only matters when the estimate does not
      // already dominate the worst case of n roundings.
      const double log_half_ulp = std::log2(half_ulp(v, f));
      double combined = lower;
      if (is_exact_exponent(lower) || lower < log_half_ulp + accumulation) {
        const std::size_t steps = inexact_steps(a, b, idx / k, idx % k);
        if (steps != 0) {
          const double rounding = log_half_ulp + std::log2(static_cast<double>(steps));
          combined = is_exact_exponent(lower) ? rounding : std::max(lower, rounding);
        }
      }
      if (is_exact_exponent(combined)) {
        b_out = max_bits;
      } else {
        const double exact = std::ceil(static_cast<double>(binary_exponent(v)) - combined);
        b_out = static_cast<int>(std::clamp(exact, 0.0, static_cast<double>(max_bits)));
      }
    }
    bits[idx] = static_cast<std::uint8_t>(b_out);
  }
  return XArray(Shape{m, k}, std::move(values), std::move(bits), f);
}

}  // namespace preciseum
