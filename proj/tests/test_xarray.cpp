#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "preciseum/reduce.hpp"
#include "preciseum/xarray.hpp"

using namespace preciseum;

namespace {

XArray random_array(const Shape& shape, std::mt19937_64& rng, int min_bits = 4) {
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  std::uniform_int_distribution<int> bits(min_bits, 53);
  const std::size_t n = element_count(shape);
  std::vector<double> v(n);
  std::vector<std::uint8_t> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = value(rng);
    b[i] = static_cast<std::uint8_t>(bits(rng));
  }
  return XArray(shape, v, b);
}

}  // namespace

TEST_CASE("construction validates and normalizes") {
  const XArray a({2, 2}, {1.0, 0.0, NAN, 4.0}, {10, 3, 40, 53});
  CHECK(a.bits()[1] == 53);
  CHECK(a.bits()[2] == 0);
  CHECK(a.at(1, 1) == XScalar::from_exact(4.0));
  CHECK_THROWS_AS(XArray({2, 2}, {1.0, 2.0}, {53, 53}), ShapeError);
  CHECK_THROWS_AS(XArray({1}, {1.0}, {60}), RangeError);
  CHECK_THROWS_AS(XArray(Shape(9, 1), {1.0}, {53}), ShapeError);
  const XArray s;
  CHECK(s.rank() == 0);
  CHECK(s.size() == 1);
  CHECK(XArray::from_exact({0, 3}, {}).size() == 0);
}

TEST_CASE("broadcast shapes") {
  CHECK(broadcast_shape({4, 3}, {3}) == Shape{4, 3});
  CHECK(broadcast_shape({4, 1}, {1, 5}) == Shape{4, 5});
  CHECK(broadcast_shape({}, {2, 2}) == Shape{2, 2});
  CHECK(broadcast_shape({2, 1, 3}, {4, 1}) == Shape{2, 4, 3});
  CHECK_THROWS_AS(broadcast_shape({4, 3}, {2}), ShapeError);
}

TEST_CASE("elementwise ops match scalar application under broadcasting") {
  std::mt19937_64 rng(31);
  const XArray a = random_array({3, 4}, rng);
  const XArray b = random_array({4}, rng);
  const XArray c = random_array({3, 1}, rng);
  for (BinaryOp op : {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div, BinaryOp::min, BinaryOp::max}) {
    const XArray ab = map_binary(op, a, b);
    const XArray ac = map_binary(op, a, c);
    REQUIRE(ab.shape() == Shape{3, 4});
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(ab.at(i, j) == apply_binary(op, a.at(i, j), b.at(j)));
        CHECK(ac.at(i, j) == apply_binary(op, a.at(i, j), c.at(i)));
      }
    }
  }
  const XArray u = map_unary(UnaryFn::exp(), a);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(u.at(k) == apply_unary(UnaryFn::exp(), a.at(k)));
  const XArray r = map_round(RoundMode::floor, a);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(r.at(k) == round_op(RoundMode::floor, a.at(k)));
  CHECK_THROWS_AS(map_binary(BinaryOp::add, a, random_array({2}, rng)), ShapeError);
  CHECK_THROWS_AS(map_binary(BinaryOp::add, a, XArray::from_exact({1}, {1.0}, FloatFormat::binary32)),
                  FormatMismatchError);
}

TEST_CASE("reshape, transpose and identical") {
  std::mt19937_64 rng(32);
  const XArray a = random_array({2, 3}, rng);
  const XArray t = a.transpose();
  CHECK(t.shape() == Shape{3, 2});
  CHECK(t.at(2, 1) == a.at(1, 2));
  CHECK(identical(t.transpose(), a));
  CHECK(a.reshape({3, 2}).at(5) == a.at(5));
  CHECK_THROWS_AS(a.reshape({4}), ShapeError);
  const XArray n1({1}, {std::numeric_limits<double>::quiet_NaN()}, {0});
  CHECK(identical(n1, n1));
  CHECK_FALSE(n1 == n1);
  CHECK_FALSE(identical(XArray::from_exact({1}, {0.0}), XArray::from_exact({1}, {-0.0})));
}

TEST_CASE("sum reduction is the atomic sum of each lane") {
  std::mt19937_64 rng(33);
  const XArray a = random_array({3, 5}, rng);
  const XArray total = sum_reduce(a);
  CHECK(total.rank() == 0);
  std::vector<XScalar> all;
  for (std::size_t k = 0; k < a.size(); ++k) all.push_back(a.at(k));
  CHECK(total.at(0) == atomic_sum(all));

  const XArray rows = sum_reduce(a, 1);
  const XArray cols = sum_reduce(a, 0);
  CHECK(rows.shape() == Shape{3});
  CHECK(cols.shape() == Shape{5});
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<XScalar> lane;
    for (std::size_t j = 0; j < 5; ++j) lane.push_back(a.at(i, j));
    CHECK(rows.at(i) == atomic_sum(lane));
  }
  for (std::size_t j = 0; j < 5; ++j) {
    std::vector<XScalar> lane;
    for (std::size_t i = 0; i < 3; ++i) lane.push_back(a.at(i, j));
    CHECK(cols.at(j) == atomic_sum(lane));
    CHECK(prod_reduce(a, 0).at(j) == atomic_product(lane));
  }
  CHECK_THROWS_AS(sum_reduce(a, 2), RangeError);
}

TEST_CASE("atomic sum") {
  // Exact sums keep all bits.
  const std::vector<XScalar> exact{XScalar::from_exact(1.0), XScalar::from_exact(2.0), XScalar::from_exact(0.5)};
  CHECK(atomic_sum(exact) == XScalar::from_exact(3.5));
  // One fold, one inaccuracy estimate: the deltas add up.
  const std::vector<XScalar> rough{XScalar::with_bits(1.0, 10), XScalar::with_bits(1.0, 10),
                                   XScalar::with_bits(1.0, 10), XScalar::with_bits(1.0, 10)};
  const XScalar s = atomic_sum(rough);
  CHECK(s.value() == 4.0);
  CHECK(s.exact_bits() == 2 - (-10 + 2));  // delta = 4 * 2^-10 = 2^-8
  CHECK(atomic_sum(std::vector<XScalar>{}) == XScalar::from_exact(0.0));
  CHECK(atomic_product(std::vector<XScalar>{}) == XScalar::from_exact(1.0));
}

TEST_CASE("min, max and mean") {
  const XArray a = XArray::from_exact({2, 3}, {3.0, -1.0, 2.0, 8.0, 5.0, 6.0});
  CHECK(min_reduce(a).at(0).value() == -1.0);
  CHECK(max_reduce(a, 0).at(1).value() == 5.0);
  CHECK(mean(a).at(0).value() == 23.0 / 6.0);
  CHECK(mean(a, 1).at(1).value() == doctest::Approx(19.0 / 3.0));
  const XArray empty = XArray::from_exact({0}, {});
  CHECK_THROWS_AS(min_reduce(empty), ShapeError);
  CHECK_THROWS_AS(mean(empty), ShapeError);
  CHECK(sum_reduce(empty).at(0) == XScalar::from_exact(0.0));
}

TEST_CASE("dot") {
  const XArray a = XArray::from_exact({3}, {1.0, 2.0, 3.0});
  const XArray b = XArray::from_exact({3}, {4.0, 5.0, 6.0});
  CHECK(dot(a, b).value() == 32.0);
  CHECK(dot(a, b).exact_bits() == 53);
  CHECK(dot(XArray::from_exact({0}, {}), XArray::from_exact({0}, {})) == XScalar::from_exact(0.0));
  CHECK_THROWS_AS(dot(a, XArray::from_exact({2}, {1.0, 2.0})), ShapeError);
}

TEST_CASE("thread count does not change results") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const XArray a = random_array({17, 23}, rng);
    const XArray b = random_array({23}, rng);
    for (unsigned threads : {2u, 3u, 8u}) {
      const Parallelism par{threads};
      CHECK(identical(map_binary(BinaryOp::mul, a, b), map_binary(BinaryOp::mul, a, b, par)));
      CHECK(identical(sum_reduce(a, 0), sum_reduce(a, 0, par)));
      CHECK(identical(sum_reduce(a, 1), sum_reduce(a, 1, par)));
      CHECK(identical(prod_reduce(a, 1), prod_reduce(a, 1, par)));
      CHECK(identical(mean(a, 0), mean(a, 0, par)));
      CHECK(identical(max_reduce(a, 1), max_reduce(a, 1, par)));
    }
  }
}
