#include <mpfr.h>

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "preciseum/autodiff.hpp"
#include "preciseum/decimal.hpp"
#include "preciseum/oracle.hpp"

using namespace preciseum;

namespace {

// Reference value of an operation on points, in MPFR.
class Big {
 public:
  explicit Big(mpfr_prec_t prec = 2200) { mpfr_init2(v_, prec); }
  Big(const Big&) = delete;
  Big& operator=(const Big&) = delete;
  ~Big() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  bool within(const Interval& r) const {
    if (mpfr_nan_p(v_)) return r.is_unbounded();
    return mpfr_cmp_d(v_, r.lo) >= 0 && mpfr_cmp_d(v_, r.hi) <= 0;
  }

 private:
  mpfr_t v_;
};

void eval_binary(BinaryOp op, double x, double y, Big& out) {
  Big a;
  Big b;
  mpfr_set_d(a.get(), x, MPFR_RNDN);
  mpfr_set_d(b.get(), y, MPFR_RNDN);
  switch (op) {
    case BinaryOp::add: mpfr_add(out.get(), a.get(), b.get(), MPFR_RNDN); break;
    case BinaryOp::sub: mpfr_sub(out.get(), a.get(), b.get(), MPFR_RNDN); break;
    case BinaryOp::mul: mpfr_mul(out.get(), a.get(), b.get(), MPFR_RNDN); break;
    case BinaryOp::div: mpfr_div(out.get(), a.get(), b.get(), MPFR_RNDN); break;
    case BinaryOp::min: mpfr_min(out.get(), a.get(), b.get(), MPFR_RNDN); break;
    case BinaryOp::max: mpfr_max(out.get(), a.get(), b.get(), MPFR_RNDN); break;
  }
}

void eval_unary(const UnaryFn& f, double x, Big& out) {
  Big a(256);
  mpfr_set_d(a.get(), x, MPFR_RNDN);
  mpfr_ptr r = out.get();
  switch (f.kind()) {
    case UnaryKind::sin: mpfr_sin(r, a.get(), MPFR_RNDN); break;
    case UnaryKind::cos: mpfr_cos(r, a.get(), MPFR_RNDN); break;
    case UnaryKind::tan: mpfr_tan(r, a.get(), MPFR_RNDN); break;
    case UnaryKind::asin: mpfr_asin(r, a.get(), MPFR_RNDN); break;
    case UnaryKind::acos: mpfr_acos(r, a.get(), MPFR_RNDN); break;
    case UnaryKind::atan: mpfr_atan(r, a.get(), MPFR_RNDN); break;
    case UnaryKind::ln: mpfr_log(r, a.get(), MPFR_RNDN); break;
    case UnaryKind::exp: mpfr_exp(r, a.get(), MPFR_RNDN); break;
    case UnaryKind::sqrt: mpfr_sqrt(r, a.get(), MPFR_RNDN); break;
    case UnaryKind::recip: mpfr_ui_div(r, 1, a.get(), MPFR_RNDN); break;
    case UnaryKind::pow_int: mpfr_pow_si(r, a.get(), static_cast<long>(f.parameter()), MPFR_RNDN); break;
    case UnaryKind::scale: mpfr_mul_d(r, a.get(), f.parameter(), MPFR_RNDN); break;
    case UnaryKind::add_const: mpfr_add_d(r, a.get(), f.parameter(), MPFR_RNDN); break;
    case UnaryKind::sigmoid:
      mpfr_neg(r, a.get(), MPFR_RNDN);
      mpfr_exp(r, r, MPFR_RNDN);
      mpfr_add_ui(r, r, 1, MPFR_RNDN);
      mpfr_ui_div(r, 1, r, MPFR_RNDN);
      break;
    case UnaryKind::tanh: mpfr_tanh(r, a.get(), MPFR_RNDN); break;
  }
}

struct Domain {
  double lo;
  double hi;
};

Interval random_interval(std::mt19937_64& rng, Domain d) {
  std::uniform_real_distribution<double> u(d.lo, d.hi);
  std::uniform_int_distribution<int> shape(0, 3);
  double a = u(rng);
  double b = u(rng);
  if (a > b) std::swap(a, b);
  switch (shape(rng)) {
    case 0: return Interval::point(a);
    case 1: return {a, std::min(d.hi, std::nextafter(a, d.hi))};
    case 2: return {a, std::min(d.hi, a + (b - a) * 1e-6)};
    default: return {a, b};
  }
}

double point_in(const Interval& x, std::mt19937_64& rng, int k) {
  if (k == 0) return x.lo;
  if (k == 1) return x.hi;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double t = x.lo + (x.hi - x.lo) * u(rng);
  return std::clamp(t, x.lo, x.hi);
}

constexpr int kIntervals = 1000;
constexpr int kPoints = 100;

int binary_misses(BinaryOp op, Domain d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int misses = 0;
  Big exact;
  for (int t = 0; t < kIntervals; ++t) {
    const Interval x = random_interval(rng, d);
    const Interval y = random_interval(rng, d);
    Interval r;
    switch (op) {
      case BinaryOp::add: r = x + y; break;
      case BinaryOp::sub: r = x - y; break;
      case BinaryOp::mul: r = x * y; break;
      case BinaryOp::div: r = x / y; break;
      case BinaryOp::min: r = min(x, y); break;
      case BinaryOp::max: r = max(x, y); break;
    }
    for (int k = 0; k < kPoints; ++k) {
      const double px = point_in(x, rng, k);
      const double py = point_in(y, rng, k);
      if (op == BinaryOp::div && py == 0.0) continue;
      eval_binary(op, px, py, exact);
      if (!exact.within(r)) ++misses;
    }
  }
  return misses;
}

int unary_misses(const UnaryFn& f, Domain d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int misses = 0;
  Big exact(256);
  for (int t = 0; t < kIntervals; ++t) {
    const Interval x = random_interval(rng, d);
    const Interval r = apply(f, x);
    for (int k = 0; k < kPoints; ++k) {
      const double px = point_in(x, rng, k);
      if (f.kind() == UnaryKind::recip && px == 0.0) continue;
      eval_unary(f, px, exact);
      if (!exact.within(r)) ++misses;
    }
  }
  return misses;
}

}  // namespace

TEST_CASE("interval arithmetic contains every point result") {
  const Domain wide{-1e3, 1e3};
  const Domain tiny{-1e-5, 1e-5};
  std::uint64_t seed = 100;
  for (BinaryOp op : {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div, BinaryOp::min, BinaryOp::max}) {
    CHECK(binary_misses(op, wide, ++seed) == 0);
    CHECK(binary_misses(op, tiny, ++seed) == 0);
  }
}

TEST_CASE("interval functions contain every point result") {
  struct Case {
    UnaryFn f;
    Domain d;
  };
  const Case cases[] = {
      {UnaryFn::sin(), {-20, 20}},        {UnaryFn::cos(), {-20, 20}},    {UnaryFn::tan(), {-1.5, 1.5}},
      {UnaryFn::asin(), {-1, 1}},         {UnaryFn::acos(), {-1, 1}},     {UnaryFn::atan(), {-50, 50}},
      {UnaryFn::ln(), {1e-9, 1e6}},       {UnaryFn::exp(), {-700, 700}},  {UnaryFn::sqrt(), {0, 1e6}},
      {UnaryFn::recip(), {-10, 10}},      {UnaryFn::pow_int(2), {-9, 9}}, {UnaryFn::pow_int(3), {-9, 9}},
      {UnaryFn::pow_int(-2), {-9, 9}},    {UnaryFn::scale(0.1), {-9, 9}}, {UnaryFn::add_const(0.3), {-9, 9}},
      {UnaryFn::sigmoid(), {-40, 40}},    {UnaryFn::tanh(), {-20, 20}},
  };
  std::uint64_t seed = 200;
  for (const Case& c : cases) {
    INFO(c.f.name());
    CHECK(unary_misses(c.f, c.d, ++seed) == 0);
  }
}

TEST_CASE("interval rounding contains every point result") {
  std::mt19937_64 rng(300);
  for (RoundMode mode : {RoundMode::floor, RoundMode::ceil, RoundMode::nearest, RoundMode::trunc}) {
    for (int t = 0; t < kIntervals; ++t) {
      const Interval x = random_interval(rng, {-50, 50});
      const Interval r = round(mode, x);
      for (int k = 0; k < kPoints; ++k) {
        const double p = point_in(x, rng, k);
        const double v = mode == RoundMode::floor  ? std::floor(p)
                         : mode == RoundMode::ceil ? std::ceil(p)
                         : mode == RoundMode::trunc ? std::trunc(p)
                                                    : std::nearbyint(p);
        CHECK((r.lo <= v && v <= r.hi));
      }
    }
  }
}

TEST_CASE("interval worked cases") {
  const Interval s = Interval{1, 2} + Interval{10, 20};
  CHECK(s.lo == 11.0);
  CHECK(s.hi == 22.0);
  const Interval x{0, 1};
  const Interval d = x - x;
  CHECK(d.lo == -1.0);
  CHECK(d.hi == 1.0);
  CHECK((Interval{1, 2} / Interval{-1, 1}).is_unbounded());
  const Interval third = Interval::point(1.0) / Interval::point(3.0);
  CHECK(third.lo < third.hi);
  CHECK(third.contains(1.0 / 3.0));
  CHECK(Interval::around(XScalar::with_bits(1.0, 10)).width() == std::ldexp(1.0, -9));
  CHECK(Interval::around(XScalar::from_exact(3.0)).width() == 0.0);
}

namespace {

ScalarProgram quadratic_program(bool stable) {
  ScalarProgram prog(5);  // a, b, c, 4, 2
  const std::size_t disc =
      prog.binary(BinaryOp::sub, prog.binary(BinaryOp::mul, 1, 1),
                  prog.binary(BinaryOp::mul, prog.binary(BinaryOp::mul, 3, 0), 2));
  const std::size_t root = prog.unary(UnaryFn::sqrt(), disc);
  const std::size_t two_a = prog.binary(BinaryOp::mul, 4, 0);
  const std::size_t minus_b = prog.unary(UnaryFn::scale(-1.0), 1);
  if (stable) {
    const std::size_t x1 = prog.binary(BinaryOp::div, prog.binary(BinaryOp::sub, minus_b, root), two_a);
    prog.mark_output(x1);
    prog.mark_output(prog.binary(BinaryOp::div, 2, prog.binary(BinaryOp::mul, 0, x1)));
  } else {
    prog.mark_output(prog.binary(BinaryOp::div, prog.binary(BinaryOp::sub, minus_b, root), two_a));
    prog.mark_output(prog.binary(BinaryOp::div, prog.binary(BinaryOp::add, minus_b, root), two_a));
  }
  return prog;
}

std::vector<XScalar> quadratic_inputs() {
  return {XScalar::from_exact(1.0), XScalar::from_exact(1000.0), from_decimal("-2e-11"),
          XScalar::from_exact(4.0), XScalar::from_exact(2.0)};
}

std::vector<Interval> boxes(const std::vector<XScalar>& xs) {
  std::vector<Interval> out;
  for (const auto& x : xs) out.push_back(Interval::around(x));
  return out;
}

}  // namespace

TEST_CASE("quadratic roots through the interval oracle") {
  const auto in = boxes(quadratic_inputs());
  const auto naive = interval_propagate(quadratic_program(false), in);
  const auto stable = interval_propagate(quadratic_program(true), in);
  CHECK(naive[1].lo <= 0.0);
  CHECK(naive[1].hi >= 2e-14);
  CHECK(stable[1].contains(2e-14));
  CHECK(stable[1].width() <= 1e-28);
  CHECK(stable[0].contains(-1000.0));
}

TEST_CASE("perturbation spread") {
  ScalarProgram id(1);
  id.mark_output(0);
  const XScalar x = XScalar::with_bits(1.5, 20);
  const std::vector<XScalar> one{x};
  const auto s = perturb_run(id, one, 16, 1);
  CHECK(s[0].width == 2 * operand_delta(x));
  CHECK(s[0].min == 1.5 - operand_delta(x));

  ScalarProgram sum(2);
  sum.mark_output(sum.binary(BinaryOp::add, 0, 1));
  const std::vector<XScalar> exact{XScalar::from_exact(0.75), XScalar::from_exact(-3.0)};
  CHECK(perturb_run(sum, exact, 32, 2)[0].width == 0.0);

  const std::vector<XScalar> fuzzy{XScalar::with_bits(0.75, 30), XScalar::with_bits(-3.0, 12)};
  const auto a = perturb_run(sum, fuzzy, 64, 99);
  const auto b = perturb_run(sum, fuzzy, 64, 99);
  CHECK(a[0].min == b[0].min);
  CHECK(a[0].max == b[0].max);
  CHECK(a[0].width == doctest::Approx(2 * (operand_delta(fuzzy[0]) + operand_delta(fuzzy[1]))));

  ScalarProgram inv(1);
  inv.mark_output(inv.unary(UnaryFn::recip(), 0));
  // 1 with no exact bits spans [0, 2]; the low endpoint divides by zero.
  const std::vector<XScalar> around_zero{XScalar::with_bits(1.0, 0)};
  CHECK(std::isinf(perturb_run(inv, around_zero, 8, 0)[0].width));

  CHECK_THROWS_AS(perturb_run(id, one, 1, 0), RangeError);
  CHECK_THROWS_AS(perturb_run(id, exact, 4, 0), ShapeError);
}

TEST_CASE("black bit checks on scalar chains") {
  std::mt19937_64 rng(400);
  std::uniform_real_distribution<double> u(-10, 10);
  std::uniform_int_distribution<int> bits(10, 50);
  for (int seed = 0; seed < 1000; ++seed) {
    ScalarProgram prog(6);
    std::size_t acc = 0;
    for (std::size_t k = 1; k < 6; ++k) acc = prog.binary(BinaryOp::add, acc, k);
    prog.mark_output(acc);
    std::vector<XScalar> in;
    for (int k = 0; k < 6; ++k) in.push_back(XScalar::with_bits(u(rng), bits(rng)));
    const auto est = prog.run_tracked(in);
    const BlackBitReport r = check_black_bits(prog, in, est, {4.0, 64, static_cast<std::uint64_t>(seed)});
    CHECK(r.pass);
  }
}

TEST_CASE("black bit check on a recorded matmul") {
  std::mt19937_64 rng(401);
  std::uniform_real_distribution<double> u(-2, 2);
  std::uniform_int_distribution<int> bits(8, 40);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> av(36), bv(36);
    std::vector<std::uint8_t> ab(36), bb(36);
    for (int i = 0; i < 36; ++i) {
      av[i] = u(rng);
      bv[i] = u(rng);
      ab[i] = static_cast<std::uint8_t>(bits(rng));
      bb[i] = static_cast<std::uint8_t>(bits(rng));
    }
    Tape tape;
    const NodeId c = tape.matmul(tape.leaf(XArray({6, 6}, av, ab)), tape.leaf(XArray({6, 6}, bv, bb)));
    const TapeProgram prog(tape, {c});
    const auto in = prog.inputs();
    const auto est = prog.tracked_outputs();
    CHECK(in.size() == 72);
    CHECK(est.size() == 36);
    const BlackBitReport r = check_black_bits(prog, in, est);
    CHECK(r.pass);
    CHECK(r.checked == 36);

    // Canary: inaccuracies inflated about 10^6 times must be caught.
    std::vector<XScalar> inflated;
    for (const auto& e : est) inflated.push_back(XScalar::with_bits(e.value(), std::max(0, e.exact_bits() - 20)));
    CHECK_FALSE(check_black_bits(prog, in, inflated).pass);
  }
}

TEST_CASE("tape replay matches the recorded values") {
  Tape tape;
  const NodeId x = tape.leaf(XArray::from_exact({2, 3}, {0.5, -1, 2, 0.25, 3, -2}));
  const NodeId w = tape.leaf(XArray({3, 2}, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, {30, 30, 30, 30, 30, 30}));
  const NodeId b = tape.leaf(XArray::from_exact({2}, {0.5, -0.5}));
  const NodeId h = tape.forward_activation(Activation::tanh, tape.forward_linear(x, w, b));
  const NodeId r = tape.forward_activation(Activation::relu, h);
  const NodeId loss = tape.mse_loss(r, tape.leaf(XArray::from_exact({2, 2}, {0, 1, 0, 1})));
  const TapeProgram prog(tape, {r, loss});
  const auto in = prog.inputs();
  std::vector<double> plain;
  std::vector<Interval> boxes_in;
  for (const auto& v : in) {
    plain.push_back(v.value());
    boxes_in.push_back(Interval::around(v));
  }
  const auto replay = prog.run_plain(plain);
  const auto tracked = prog.tracked_outputs();
  REQUIRE(replay.size() == tracked.size());
  for (std::size_t k = 0; k < replay.size(); ++k) CHECK(replay[k] == tracked[k].value());
  const auto iv = interval_propagate(prog, boxes_in);
  for (std::size_t k = 0; k < iv.size(); ++k) CHECK(iv[k].contains(tracked[k].value()));
  CHECK_THROWS_AS(TapeProgram(tape, {99}), RangeError);
  CHECK_THROWS_AS(prog.run_plain(std::vector<double>(3)), ShapeError);
}

TEST_CASE("argument errors") {
  ScalarProgram prog(2);
  CHECK_THROWS_AS(prog.binary(BinaryOp::add, 0, 2), RangeError);
  CHECK_THROWS_AS(prog.mark_output(5), RangeError);
  prog.mark_output(prog.binary(BinaryOp::mul, 0, 1));
  const std::vector<XScalar> in{XScalar::from_exact(1.0), XScalar::from_exact(2.0)};
  const std::vector<XScalar> two{in[0], in[1]};
  CHECK_THROWS_AS(check_black_bits(prog, in, two), ShapeError);
  CHECK_THROWS_AS(prog.run_tracked(std::vector<XScalar>{in[0]}), ShapeError);
}
