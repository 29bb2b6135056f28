#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "preciseum/matmul.hpp"
#include "preciseum/reduce.hpp"

using namespace preciseum;

namespace {

constexpr double kTol = 1e-9;

XArray random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, int min_bits = 8,
                     int max_bits = 40, int exp_lo = -4, int exp_hi = 4) {
  std::uniform_real_distribution<double> mant(0.5, 1.0);
  std::uniform_int_distribution<int> ex(exp_lo, exp_hi);
  std::uniform_int_distribution<int> bits(min_bits, max_bits);
  std::bernoulli_distribution neg(0.5);
  std::vector<double> v(rows * cols);
  std::vector<std::uint8_t> b(rows * cols);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::ldexp(mant(rng), ex(rng)) * (neg(rng) ? -1.0 : 1.0);
    b[i] = static_cast<std::uint8_t>(bits(rng));
  }
  return XArray(Shape{rows, cols}, v, b);
}

Matrix random_exponents(std::size_t rows, std::size_t cols, std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

// Loop order j, l, i instead of the library's i, j, l.
Matrix tropical_reference(const Matrix& x, const Matrix& y) {
  Matrix out(x.rows(), y.cols(), kExactExponent);
  for (std::size_t j = 0; j < y.cols(); ++j)
    for (std::size_t l = 0; l < x.cols(); ++l)
      for (std::size_t i = 0; i < x.rows(); ++i) {
        if (is_exact_exponent(x(i, l)) || is_exact_exponent(y(l, j))) continue;
        out(i, j) = std::max(out(i, j), x(i, l) + y(l, j));
      }
  return out;
}

// Direct evaluation of the power-mean bound in long double, no normalization.
Matrix holder_reference(const XArray& a, const Matrix& ae, const XArray& b, const Matrix& be, double p) {
  const std::size_t m = a.shape()[0];
  const std::size_t n = a.shape()[1];
  const std::size_t k = b.shape()[1];
  auto pw = [](double e, long double p_) -> long double {
    return is_exact_exponent(e) ? 0.0L : std::exp2(static_cast<long double>(e) * p_);
  };
  Matrix out(m, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      long double left = 0;
      long double right = 0;
      for (std::size_t l = 0; l < n; ++l) {
        left += std::pow(std::fabs(static_cast<long double>(a.values()[i * n + l])), p) * pw(be(l, j), p);
        right += pw(ae(i, l), p) * std::pow(std::fabs(static_cast<long double>(b.values()[l * k + j])), p);
      }
      const long double top = std::max(left, right);
      out(i, j) = top == 0 ? kExactExponent
                           : static_cast<double>((std::log2(top) - std::log2(static_cast<long double>(n))) / p);
    }
  return out;
}

void check_le(const Matrix& lo, const Matrix& hi, double tol = kTol) {
  REQUIRE(lo.rows() == hi.rows());
  REQUIRE(lo.cols() == hi.cols());
  for (std::size_t i = 0; i < lo.data().size(); ++i) {
    CHECK(lo.data()[i] <= hi.data()[i] + tol);
  }
}

void check_close(const Matrix& x, const Matrix& y, double tol) {
  REQUIRE(x.data().size() == y.data().size());
  for (std::size_t i = 0; i < x.data().size(); ++i) {
    if (is_exact_exponent(x.data()[i]) || is_exact_exponent(y.data()[i])) {
      CHECK(is_exact_exponent(x.data()[i]));
      CHECK(is_exact_exponent(y.data()[i]));
    } else {
      CHECK(std::fabs(x.data()[i] - y.data()[i]) <= tol);
    }
  }
}

}  // namespace

TEST_CASE("tropical product") {
  const Matrix row(1, 3, {1, 2, 3});
  const Matrix col(3, 1, {3, 2, 1});
  CHECK(tropical_matmul(row, col)(0, 0) == 4.0);

  Matrix id(3, 3, kExactExponent);
  for (std::size_t i = 0; i < 3; ++i) id(i, i) = 0.0;
  std::mt19937_64 rng(1);
  const Matrix y = random_exponents(3, 4, rng, -40, 10);
  CHECK(tropical_matmul(id, y) == y);

  for (int t = 0; t < 50; ++t) {
    const Matrix x = random_exponents(5, 5, rng, -40, -8);
    const Matrix z = random_exponents(5, 5, rng, -40, -8);
    CHECK(tropical_matmul(x, z) == tropical_reference(x, z));
  }
  CHECK(tropical_times(kExactExponent, kUnboundedExponent) == kExactExponent);
  CHECK(is_unbounded_exponent(tropical_times(3.0, kUnboundedExponent)));
}

TEST_CASE("exponent matrices") {
  const XArray a({1, 4}, {1.0, 0.0, NAN, 6.0}, {53, 53, 0, 10});
  const Matrix e = inaccuracy_exponents(a);
  CHECK(is_exact_exponent(e(0, 0)));
  CHECK(is_exact_exponent(e(0, 1)));
  CHECK(is_unbounded_exponent(e(0, 2)));
  CHECK(e(0, 3) == 2.0 - 10.0);
  const Matrix g = log2_magnitudes(a);
  CHECK(g(0, 0) == 0.0);
  CHECK(is_exact_exponent(g(0, 1)));
  CHECK(g(0, 3) == doctest::Approx(std::log2(6.0)));
}

TEST_CASE("estimate_v1 small cases and tropical ceiling") {
  CHECK(estimate_v1(Matrix(1, 1, {-3}), Matrix(1, 1, {-7}))(0, 0) == doctest::Approx(-10.0));
  CHECK(estimate_v1(Matrix(1, 3, {-1, -2, -3}), Matrix(3, 1, {-5, -4, -3}))(0, 0) == doctest::Approx(-6.0));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const Matrix x = random_exponents(6, 6, rng, -40, -8);
    const Matrix y = random_exponents(6, 6, rng, -40, -8);
    check_le(estimate_v1(x, y), tropical_reference(x, y));
  }
}

TEST_CASE("estimator ordering chain") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = std::size_t{1} << (t % 5);
    const XArray a = random_matrix(3, n, rng);
    const XArray b = random_matrix(n, 4, rng);
    const Matrix ae = inaccuracy_exponents(a);
    const Matrix be = inaccuracy_exponents(b);
    const Matrix mixed = mixed_tropical(a, ae, b, be);
    const Matrix v1 = estimate_v1(ae, be);
    const Matrix v2 = estimate_v2(a, ae, b, be);
    check_le(v1, tropical_reference(ae, be));
    check_le(v2, mixed);
    check_le(v1, v2);
    Matrix prev = v2;
    for (double p : {2.0, 4.0, 8.0, 16.0, 32.0}) {
      const Matrix h = estimate_holder(a, ae, b, be, p);
      check_le(prev, h);
      check_le(h, mixed);
      prev = h;
    }
  }
}

TEST_CASE("estimators match direct evaluation") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const XArray a = random_matrix(4, 6, rng);
    const XArray b = random_matrix(6, 3, rng);
    const Matrix ae = inaccuracy_exponents(a);
    const Matrix be = inaccuracy_exponents(b);
    check_close(estimate_v2(a, ae, b, be), holder_reference(a, ae, b, be, 1.0), 1e-9);
    check_close(estimate_holder(a, ae, b, be, 1.0), estimate_v2(a, ae, b, be), 0.0);
    for (double p : {2.0, 4.0, 8.0}) {
      check_close(estimate_holder(a, ae, b, be, p), holder_reference(a, ae, b, be, p), 1e-9);
    }
  }
}

TEST_CASE("high order Hölder approaches the mixed bound") {
  // One dominant term per output (spread of 20 binades) makes the power mean
  // converge to the maximum within log2(n)/p.
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const XArray a = random_matrix(4, 4, rng, 8, 40, -20, 20);
    const XArray b = random_matrix(4, 4, rng, 8, 40, -20, 20);
    const Matrix ae = inaccuracy_exponents(a);
    const Matrix be = inaccuracy_exponents(b);
    const Matrix h = estimate_holder(a, ae, b, be, 32.0);
    const Matrix mixed = mixed_tropical(a, ae, b, be);
    for (std::size_t i = 0; i < h.data().size(); ++i) {
      CHECK(mixed.data()[i] - h.data()[i] <= 2.0 / 32.0 + 0.25);
    }
  }
}

TEST_CASE("Hölder order selection and overflow guard") {
  std::mt19937_64 rng(6);
  for (int sign : {1, -1}) {
    const XArray a = random_matrix(4, 4, rng, 8, 40, 300 * sign - 2, 300 * sign);
    const XArray b = random_matrix(4, 4, rng, 8, 40, 300 * sign - 2, 300 * sign);
    const Matrix ae = inaccuracy_exponents(a);
    const Matrix be = inaccuracy_exponents(b);
    CHECK(auto_holder_order(a, ae, b, be) == 2);
    const HolderReport r = estimate_holder_report(a, ae, b, be, 0.0);
    CHECK(r.p == 2.0);
    CHECK(r.intermediates_finite);
    for (double v : r.estimate.data()) CHECK(std::isfinite(v));
    check_le(r.estimate, mixed_tropical(a, ae, b, be));
  }
  const XArray small = random_matrix(4, 4, rng, 8, 40, -2, 2);
  const Matrix se = inaccuracy_exponents(small);
  // M <= 42 here, so 16 * (42 + 2 + 4) < 1020 but 32 * 48 > 1020.
  CHECK(auto_holder_order(small, se, small, se) == 16);
  CHECK_THROWS_AS(estimate_holder(small, se, small, se, 0.5), RangeError);
}

TEST_CASE("exact operands give exact estimates") {
  const XArray a = XArray::from_exact({2, 2}, {1, 2, 3, 4});
  const XArray b = XArray::from_exact({2, 2}, {5, 6, 7, 8});
  for (const Estimator est : {Estimator::v1(), Estimator::v2(), Estimator::holder(4), Estimator::holder_auto()}) {
    const Matrix e = estimate(a, b, est);
    for (double v : e.data()) CHECK(is_exact_exponent(v));
    const XArray c = matmul(a, b, est);
    CHECK(std::vector<double>(c.values().begin(), c.values().end()) == std::vector<double>{19, 22, 43, 50});
    for (auto bits : c.bits()) CHECK(bits == 53);
  }
}

TEST_CASE("identity product keeps the operand") {
  std::mt19937_64 rng(7);
  std::vector<double> eye(16, 0.0);
  for (std::size_t i = 0; i < 4; ++i) eye[i * 5] = 1.0;
  const XArray id = XArray::from_exact({4, 4}, eye);
  for (int t = 0; t < 20; ++t) {
    const XArray b = random_matrix(4, 4, rng);
    const XArray c = matmul(id, b);
    CHECK(std::equal(c.values().begin(), c.values().end(), b.values().begin()));
    for (std::size_t i = 0; i < 16; ++i) {
      // The mean over four terms undercounts by log2 4 = 2 bits at most.
      CHECK(c.bits()[i] >= b.bits()[i]);
      CHECK(c.bits()[i] <= b.bits()[i] + 2);
    }
  }
}

TEST_CASE("1x1 product against scalar multiplication") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const XArray a = random_matrix(1, 1, rng);
    const XArray b = random_matrix(1, 1, rng);
    const double est = estimate(a, b, Estimator::v2())(0, 0);
    const XScalar s = mul(a.at(0), b.at(0));
    CHECK(std::exp2(est) < 2 * implied_delta(s));
    const double direct = std::log2(std::max(std::fabs(a.values()[0]) * operand_delta(b.at(0)),
                                             std::fabs(b.values()[0]) * operand_delta(a.at(0))));
    CHECK(est == doctest::Approx(direct).epsilon(1e-12));
    const XArray c = matmul(a, b);
    CHECK(c.values()[0] == s.value());
    CHECK(c.bits()[0] >= s.exact_bits());
  }
}

TEST_CASE("value kernel matches a plain fused loop") {
  std::mt19937_64 rng(9);
  for (std::size_t n : {1u, 3u, 17u, 70u}) {
    const XArray a = random_matrix(5, n, rng);
    const XArray b = random_matrix(n, 7, rng);
    const std::vector<double> got = matmul_values(a, b);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 7; ++j) {
        double acc = 0.0;
        for (std::size_t l = 0; l < n; ++l) acc = std::fma(a.values()[i * n + l], b.values()[l * 7 + j], acc);
        CHECK(got[i * 7 + j] == acc);
      }
  }
}

TEST_CASE("results do not depend on the thread count") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10; ++t) {
    const XArray a = random_matrix(33, 40, rng);
    const XArray b = random_matrix(40, 29, rng);
    const XArray one = matmul(a, b, Estimator::v2(), {1});
    for (unsigned threads : {2u, 3u, 8u}) {
      CHECK(identical(one, matmul(a, b, Estimator::v2(), {threads})));
      CHECK(identical(matmul(a, b, Estimator::holder_auto(), {1}),
                      matmul(a, b, Estimator::holder_auto(), {threads})));
    }
  }
}

TEST_CASE("scale covariance") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const XArray a = random_matrix(4, 5, rng);
    std::vector<double> bv(20);
    std::uniform_real_distribution<double> d(-3, 3);
    for (auto& v : bv) v = d(rng);
    const XArray b = XArray::from_exact({5, 4}, bv);
    const int shift = static_cast<int>(t % 21) - 10;
    std::vector<double> scaled(a.values().begin(), a.values().end());
    for (auto& v : scaled) v = std::ldexp(v, shift);
    const XArray a2({4, 5}, scaled, std::vector<std::uint8_t>(a.bits().begin(), a.bits().end()));
    const Matrix be = inaccuracy_exponents(b);
    const Matrix v2 = estimate_v2(a, inaccuracy_exponents(a), b, be);
    const Matrix v2s = estimate_v2(a2, inaccuracy_exponents(a2), b, be);
    const Matrix mx = mixed_tropical(a, inaccuracy_exponents(a), b, be);
    const Matrix mxs = mixed_tropical(a2, inaccuracy_exponents(a2), b, be);
    for (std::size_t i = 0; i < v2.data().size(); ++i) {
      // The bounds are rounded logarithms, so the shift holds to 1e-9.
      CHECK(std::fabs(v2s.data()[i] - v2.data()[i] - shift) <= kTol);
      CHECK(std::fabs(mxs.data()[i] - mx.data()[i] - shift) <= kTol);
    }
  }
}

TEST_CASE("shape errors") {
  const XArray a = XArray::from_exact({2, 3}, {1, 2, 3, 4, 5, 6});
  CHECK_THROWS_AS(matmul(a, a), ShapeError);
  CHECK_THROWS_AS(matmul(a, XArray::from_exact({3}, {1, 2, 3})), ShapeError);
  CHECK_THROWS_AS(matmul(XArray::from_exact({2, 0}, {}), XArray::from_exact({0, 2}, {})), ShapeError);
  CHECK_THROWS_AS(estimate_v1(Matrix(2, 3), Matrix(2, 3)), ShapeError);
}

TEST_CASE("dot product through matmul") {
  const XArray x = XArray::from_exact({3}, {1, 2, 3});
  const XArray y = XArray({3}, {4, 5, 6}, {10, 10, 10});
  const XScalar d = dot(x, y);
  CHECK(d.value() == 32.0);
  // Every y_l has exponent 2, so the V2 bound is the mean of |x_l| * 2^-8.
  const double est = std::log2((1 * std::ldexp(1.0, 2 - 10) + 2 * std::ldexp(1.0, 2 - 10) +
                                3 * std::ldexp(1.0, 2 - 10)) / 3.0);
  CHECK(d.exact_bits() == static_cast<int>(std::ceil(5 - est)));
}
