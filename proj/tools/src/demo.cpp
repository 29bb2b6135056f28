#include "preciseum_demo/demo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <tuple>

#include "preciseum/autodiff.hpp"
#include "preciseum/decimal.hpp"
#include "preciseum/matmul.hpp"
#include "preciseum/oracle.hpp"
#include "preciseum/program.hpp"
#include "preciseum/render.hpp"

namespace preciseum::demo {

namespace {

XScalar parse_input(const std::string& name, const std::string& text) {
  try {
    return from_decimal(text);
  } catch (const ParseError& e) {
    throw UsageError(name + ": " + e.what());
  }
}

std::string verdict(const BlackBitReport& report, std::size_t k) {
  const ElementCheck& c = report.elements.at(k);
  if (c.informational) return "n/a";
  return c.ok ? "pass" : "fail";
}

ReportRow root_row(const std::string& label, const XScalar& x, const std::string& oracle) {
  ReportRow row;
  row.label = label;
  const std::string sci = format(x, Style::scientific(16));
  row.text = {{"fixed15", format(x, Style::fixed(15))}, {"scientific16", sci}, {"oracle", oracle}};
  row.numbers = {{"value", x.value()},
                 {"bits", static_cast<double>(x.exact_bits())},
                 {"exact_digits", static_cast<double>(exact_decimal_digits(x))},
                 {"masked", static_cast<double>(count_masked(sci))}};
  return row;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

DemoReport cmd_quadratic(const std::string& a_text, const std::string& b_text, const std::string& c_text,
                         QuadraticMethod method) {
  const XScalar a = parse_input("a", a_text);
  const XScalar b = parse_input("b", b_text);
  const XScalar c = parse_input("c", c_text);
  if (a.value() == 0.0) throw UsageError("a must be nonzero");

  // Registers 0..4: a, b, c and the exact constants 4 and 2.
  ScalarProgram prog(5);
  const std::size_t ra = 0, rb = 1, rc = 2, r4 = 3, r2 = 4;
  const std::size_t disc = prog.binary(BinaryOp::sub, prog.binary(BinaryOp::mul, rb, rb),
                                       prog.binary(BinaryOp::mul, prog.binary(BinaryOp::mul, r4, ra), rc));
  const std::size_t root = prog.unary(UnaryFn::sqrt(), disc);
  const std::size_t two_a = prog.binary(BinaryOp::mul, r2, ra);
  std::size_t x1 = 0;
  std::size_t x2 = 0;
  if (method == QuadraticMethod::naive) {
    const std::size_t minus_b = prog.unary(UnaryFn::scale(-1.0), rb);
    x1 = prog.binary(BinaryOp::div, prog.binary(BinaryOp::sub, minus_b, root), two_a);
    x2 = prog.binary(BinaryOp::div, prog.binary(BinaryOp::add, minus_b, root), two_a);
  } else {
    // -b - sgn(b) sqrt(D) = -(b + sgn(b) sqrt(D)): no cancellation.
    const BinaryOp toward = std::signbit(b.value()) ? BinaryOp::sub : BinaryOp::add;
    const std::size_t t = prog.unary(UnaryFn::scale(-1.0), prog.binary(toward, rb, root));
    x1 = prog.binary(BinaryOp::div, t, two_a);
    x2 = prog.binary(BinaryOp::div, rc, prog.binary(BinaryOp::mul, ra, x1));
  }
  prog.mark_output(x1);
  prog.mark_output(x2);

  const std::vector<XScalar> inputs{a, b, c, XScalar::from_exact(4.0), XScalar::from_exact(2.0)};
  const std::vector<XScalar> roots = prog.run_tracked(inputs);
  const BlackBitReport oracle = check_black_bits(prog, inputs, roots);

  DemoReport report;
  report.demo = method == QuadraticMethod::naive ? "quadratic-naive" : "quadratic-stable";
  report.rows.push_back(root_row("x1", roots[0], verdict(oracle, 0)));
  report.rows.push_back(root_row("x2", roots[1], verdict(oracle, 1)));
  return report;
}

DemoReport cmd_arcsin(const std::string& x_text, int digits) {
  const XScalar parsed = parse_input("x", x_text);
  if (!(std::fabs(parsed.value()) <= 1.0)) throw UsageError("x must lie in [-1, 1]");
  if (digits < 1 || digits > 17) throw UsageError("digits must lie in [1, 17]");
  const int bits = static_cast<int>(std::ceil(digits / std::log10(2.0)));
  const XScalar x = XScalar::with_bits(parsed.value(), std::min(bits, parsed.exact_bits()));

  ScalarProgram prog(1);
  prog.mark_output(prog.unary(UnaryFn::asin(), 0));
  const std::vector<XScalar> inputs{x};
  const std::vector<XScalar> out = prog.run_tracked(inputs);
  const BlackBitReport oracle = check_black_bits(prog, inputs, out);

  const Style style = Style::fixed(std::max(3, digits - 3));
  DemoReport report;
  report.demo = "arcsin";
  for (const auto& [label, v, check] : {std::tuple{std::string("x"), x, std::string("n/a")},
                                        std::tuple{std::string("asin"), out[0], verdict(oracle, 0)}}) {
    ReportRow row;
    row.label = label;
    row.text = {{"rendered", format(v, style)}, {"scientific16", format(v, Style::scientific(16))},
                {"oracle", check}};
    row.numbers = {{"value", v.value()},
                   {"bits", static_cast<double>(v.exact_bits())},
                   {"exact_digits", static_cast<double>(exact_decimal_digits(v))}};
    report.rows.push_back(std::move(row));
  }
  return report;
}

MatmulInputs random_matmul_inputs(std::size_t n, Distribution dist, std::uint64_t seed) {
  if (n < 1 || n > 512) throw UsageError("n must lie in [1, 512]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> spread(-30, 30);
  std::uniform_int_distribution<int> bit_count(8, 40);
  auto make = [&] {
    std::vector<double> values(n * n);
    std::vector<std::uint8_t> bits(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
      values[k] = unit(rng);
      if (dist == Distribution::wide) values[k] = std::ldexp(values[k], spread(rng));
      bits[k] = static_cast<std::uint8_t>(dist == Distribution::exact ? 53 : bit_count(rng));
    }
    return XArray({n, n}, std::move(values), std::move(bits));
  };
  XArray a = make();
  XArray b = make();
  return {std::move(a), std::move(b)};
}

DemoReport cmd_matmul_bounds(const MatmulInputs& in, const std::vector<double>& orders) {
  const Matrix a_exp = inaccuracy_exponents(in.a);
  const Matrix b_exp = inaccuracy_exponents(in.b);
  const Matrix ceiling = mixed_tropical(in.a, a_exp, in.b, b_exp);

  DemoReport report;
  report.demo = "matmul-bounds";
  auto add_row = [&](const std::string& label, Estimator est, double p) {
    const auto start = std::chrono::steady_clock::now();
    const Matrix bound = estimate(in.a, in.b, est);
    const double elapsed = seconds_since(start);
    double gap = 0.0;
    std::size_t compared = 0;
    std::size_t exact = 0;
    std::size_t above = 0;
    for (std::size_t k = 0; k < bound.data().size(); ++k) {
      const double e = bound.data()[k];
      const double m = ceiling.data()[k];
      if (is_exact_exponent(e)) ++exact;
      if (is_exact_exponent(e) || is_unbounded_exponent(e) || is_exact_exponent(m) || is_unbounded_exponent(m)) {
        continue;
      }
      gap += m - e;
      if (e > m) ++above;
      ++compared;
    }
    ReportRow row;
    row.label = label;
    row.numbers = {{"p", p},
                   {"mean_gap", compared == 0 ? 0.0 : gap / static_cast<double>(compared)},
                   {"exact_entries", static_cast<double>(exact)},
                   {"above_ceiling", static_cast<double>(above)},
                   {"seconds", elapsed}};
    report.rows.push_back(std::move(row));
  };
  add_row("v1", Estimator::v1(), 1.0);
  add_row("v2", Estimator::v2(), 1.0);
  for (double p : orders) {
    if (p == 0.0) {
      const double chosen = auto_holder_order(in.a, a_exp, in.b, b_exp);
      add_row("holder(auto)", Estimator::holder_auto(), chosen);
    } else {
      if (p < 1.0) throw UsageError("Holder orders must be at least 1");
      char label[48];
      std::snprintf(label, sizeof label, "holder(%g)", p);
      add_row(label, Estimator::holder(p), p);
    }
  }
  return report;
}

DemoReport cmd_nn_train(const TrainingOptions& options) {
  if (options.epochs < 1 || options.epochs > 10000) throw UsageError("epochs must lie in [1, 10000]");
  if (options.width < 1 || options.width > 16) throw UsageError("width must lie in [1, 16]");
  const std::size_t batch = 16;
  const auto width = static_cast<std::size_t>(options.width);

  // The task is fixed; the seed only drives the initial weights.
  std::mt19937_64 data_rng(20240611);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> xs(batch * 2);
  std::vector<double> ys(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    xs[2 * i] = unit(data_rng);
    xs[2 * i + 1] = unit(data_rng);
    ys[i] = 0.5 * std::sin(3.0 * xs[2 * i]) + 0.25 * xs[2 * i + 1];
  }
  const XArray x = XArray::from_exact({batch, 2}, xs);
  const XArray y = XArray::from_exact({batch, 1}, ys);

  std::mt19937_64 rng(options.seed);
  auto init = [&](std::size_t rows, std::size_t cols, double scale) {
    std::vector<double> v(rows * cols);
    for (double& e : v) e = scale * unit(rng);
    return XArray::from_exact({rows, cols}, std::move(v));
  };
  std::vector<XArray> params{init(2, width, 1.0), XArray::from_exact({width}, std::vector<double>(width, 0.0)),
                             init(width, 1, 1.0 / std::sqrt(static_cast<double>(width))),
                             XArray::from_exact({1}, {0.0})};
  const XScalar lr = from_decimal("0.1");

  DemoReport report;
  report.demo = "nn-train";
  Tape last;
  NodeId pred_id = 0;
  NodeId loss_id = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    Tape tape;
    const NodeId xin = tape.leaf(x);
    std::vector<NodeId> leaf_ids;
    for (const XArray& p : params) leaf_ids.push_back(tape.leaf(p));
    const NodeId target = tape.leaf(y);
    const NodeId hidden = tape.forward_activation(Activation::tanh, tape.forward_linear(xin, leaf_ids[0], leaf_ids[1]));
    pred_id = tape.forward_linear(hidden, leaf_ids[2], leaf_ids[3]);
    loss_id = tape.mse_loss(pred_id, target);
    const Gradients grads = backward(tape, loss_id, XArray::scalar(XScalar::from_exact(1.0)));

    std::vector<XArray> param_grads;
    int min_grad_bits = mantissa_bits(FloatFormat::binary64);
    for (NodeId id : leaf_ids) {
      param_grads.push_back(*grads[id]);
      for (std::uint8_t bits : grads[id]->bits()) min_grad_bits = std::min<int>(min_grad_bits, bits);
    }
    const XScalar loss = tape.value(loss_id).at(0);
    ReportRow row;
    row.label = "epoch " + std::to_string(epoch);
    row.numbers = {{"epoch", static_cast<double>(epoch)},
                   {"loss", loss.value()},
                   {"loss_bits", static_cast<double>(loss.exact_bits())},
                   {"min_grad_bits", static_cast<double>(min_grad_bits)}};
    report.rows.push_back(std::move(row));

    params = sgd_step(params, param_grads, lr);
    last = std::move(tape);
  }

  const TapeProgram prog(last, {pred_id, loss_id});
  const std::vector<XScalar> inputs = prog.inputs();
  const std::vector<XScalar> outputs = prog.tracked_outputs();
  const BlackBitReport oracle = check_black_bits(prog, inputs, outputs);
  ReportRow row;
  row.label = "oracle";
  row.text = {{"black_bits", oracle.pass ? "pass" : "fail"}};
  row.numbers = {{"checked", static_cast<double>(oracle.checked)},
                 {"violations", static_cast<double>(oracle.violations)},
                 {"worst_ratio", oracle.worst_ratio}};
  report.rows.push_back(std::move(row));
  return report;
}

}  // namespace preciseum::demo
