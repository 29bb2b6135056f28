#include "preciseum/program.hpp"

#include <cmath>
#include <string>

namespace preciseum {

namespace {

struct PlainOps {
  FloatFormat format;

  double finish(double v) const { return round_to_format(v, format); }
  double zero() const { return 0.0; }
  double constant(double v) const { return v; }
  double binary(BinaryOp op, double x, double y) const {
    switch (op) {
      case BinaryOp::add: return finish(x + y);
      case BinaryOp::sub: return finish(x - y);
      case BinaryOp::mul: return finish(x * y);
      case BinaryOp::div: return finish(x / y);
      case BinaryOp::min:
        if (std::isnan(x)) return y;
        if (std::isnan(y)) return x;
        return std::min(x, y);
      case BinaryOp::max:
        if (std::isnan(x)) return y;
        if (std::isnan(y)) return x;
        return std::max(x, y);
    }
    return x;
  }
  double unary(const UnaryFn& f, double x) const { return finish(f.evaluate(x)); }
  double round(RoundMode mode, double x) const {
    switch (mode) {
      case RoundMode::floor: return std::floor(x);
      case RoundMode::ceil: return std::ceil(x);
      case RoundMode::nearest: return std::nearbyint(x);
      case RoundMode::trunc: return std::trunc(x);
    }
    return x;
  }
  // Matmul accumulation: unrounded fused steps, rounded once at the end.
  double fma(double a, double b, double acc) const { return std::fma(a, b, acc); }
};

struct IntervalOps {
  Interval finish(const Interval& v) const { return v; }
  Interval zero() const { return Interval::point(0.0); }
  Interval constant(double v) const { return Interval::point(v); }
  Interval binary(BinaryOp op, const Interval& x, const Interval& y) const {
    switch (op) {
      case BinaryOp::add: return x + y;
      case BinaryOp::sub: return x - y;
      case BinaryOp::mul: return x * y;
      case BinaryOp::div: return x / y;
      case BinaryOp::min: return min(x, y);
      case BinaryOp::max: return max(x, y);
    }
    return x;
  }
  Interval unary(const UnaryFn& f, const Interval& x) const { return apply(f, x); }
  Interval round(RoundMode mode, const Interval& x) const { return preciseum::round(mode, x); }
  Interval fma(const Interval& a, const Interval& b, const Interval& acc) const { return acc + a * b; }
};

struct TrackedOps {
  XScalar binary(BinaryOp op, const XScalar& x, const XScalar& y) const { return apply_binary(op, x, y); }
  XScalar unary(const UnaryFn& f, const XScalar& x) const { return apply_unary(f, x); }
  XScalar round(RoundMode mode, const XScalar& x) const { return round_op(mode, x); }
};

void require_count(std::size_t got, std::size_t want) {
  if (got != want) {
    throw ShapeError("program expects " + std::to_string(want) + " inputs, got " + std::to_string(got));
  }
}

}  // namespace

std::size_t ScalarProgram::check_register(std::size_t reg) const {
  if (reg >= register_count()) throw RangeError("register " + std::to_string(reg) + " is not defined yet");
  return reg;
}

std::size_t ScalarProgram::binary(BinaryOp op, std::size_t lhs, std::size_t rhs) {
  Instruction ins;
  ins.kind = InstructionKind::binary;
  ins.binary = op;
  ins.lhs = check_register(lhs);
  ins.rhs = check_register(rhs);
  code_.push_back(ins);
  return register_count() - 1;
}

std::size_t ScalarProgram::unary(const UnaryFn& f, std::size_t operand) {
  Instruction ins;
  ins.kind = InstructionKind::unary;
  ins.unary = f;
  ins.lhs = check_register(operand);
  code_.push_back(ins);
  return register_count() - 1;
}

std::size_t ScalarProgram::round(RoundMode mode, std::size_t operand) {
  Instruction ins;
  ins.kind = InstructionKind::round;
  ins.round = mode;
  ins.lhs = check_register(operand);
  code_.push_back(ins);
  return register_count() - 1;
}

void ScalarProgram::mark_output(std::size_t reg) { outputs_.push_back(check_register(reg)); }

template <class T, class Ops>
std::vector<T> ScalarProgram::replay(std::span<const T> inputs, const Ops& ops) const {
  require_count(inputs.size(), inputs_);
  std::vector<T> regs(inputs.begin(), inputs.end());
  regs.reserve(register_count());
  for (const Instruction& ins : code_) {
    switch (ins.kind) {
      case InstructionKind::binary: regs.push_back(ops.binary(ins.binary, regs[ins.lhs], regs[ins.rhs])); break;
      case InstructionKind::unary: regs.push_back(ops.unary(ins.unary, regs[ins.lhs])); break;
      case InstructionKind::round: regs.push_back(ops.round(ins.round, regs[ins.lhs])); break;
    }
  }
  std::vector<T> out;
  out.reserve(outputs_.size());
  for (std::size_t reg : outputs_) out.push_back(regs[reg]);
  return out;
}

std::vector<XScalar> ScalarProgram::run_tracked(std::span<const XScalar> inputs) const {
  return replay(inputs, TrackedOps{});
}

std::vector<double> ScalarProgram::run_plain(std::span<const double> inputs, FloatFormat format) const {
  return replay(inputs, PlainOps{format});
}

std::vector<Interval> ScalarProgram::run_interval(std::span<const Interval> inputs) const {
  return replay(inputs, IntervalOps{});
}

TapeProgram::TapeProgram(const Tape& tape, std::vector<NodeId> outputs)
    : tape_(&tape), outputs_(std::move(outputs)) {
  for (NodeId id : outputs_) tape.node(id);
  for (const Node& n : tape.nodes()) {
    if (n.op == NodeOp::leaf) input_count_ += n.output.size();
  }
}

std::size_t TapeProgram::output_count() const {
  std::size_t n = 0;
  for (NodeId id : outputs_) n += tape_->value(id).size();
  return n;
}

std::vector<XScalar> TapeProgram::inputs() const {
  std::vector<XScalar> out;
  out.reserve(input_count_);
  for (const Node& n : tape_->nodes()) {
    if (n.op != NodeOp::leaf) continue;
    for (std::size_t k = 0; k < n.output.size(); ++k) out.push_back(n.output.at(k));
  }
  return out;
}

std::vector<XScalar> TapeProgram::tracked_outputs() const {
  std::vector<XScalar> out;
  for (NodeId id : outputs_) {
    const XArray& v = tape_->value(id);
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(v.at(k));
  }
  return out;
}

template <class T, class Ops>
std::vector<T> TapeProgram::replay(std::span<const T> inputs, const Ops& ops) const {
  require_count(inputs.size(), input_count_);
  const auto& nodes = tape_->nodes();
  std::vector<std::vector<T>> vals(nodes.size());
  std::size_t cursor = 0;
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const Node& n = nodes[id];
    const Shape& shape = n.output.shape();
    std::vector<T>& out = vals[id];
    switch (n.op) {
      case NodeOp::leaf:
        out.assign(inputs.begin() + static_cast<std::ptrdiff_t>(cursor),
                   inputs.begin() + static_cast<std::ptrdiff_t>(cursor + n.output.size()));
        cursor += n.output.size();
        break;
      case NodeOp::matmul: {
        const auto& a = vals[n.inputs[0]];
        const auto& b = vals[n.inputs[1]];
        const std::size_t m = shape[0];
        const std::size_t k = shape[1];
        const std::size_t inner = n.recorded_inputs[0].shape()[1];
        out.reserve(m * k);
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < k; ++j) {
            T acc = ops.zero();
            for (std::size_t l = 0; l < inner; ++l) acc = ops.fma(a[i * inner + l], b[l * k + j], acc);
            out.push_back(ops.finish(acc));
          }
        }
        break;
      }
      case NodeOp::add_bias: {
        const auto& x = vals[n.inputs[0]];
        const auto& b = vals[n.inputs[1]];
        const std::size_t k = shape[1];
        out.reserve(x.size());
        for (std::size_t idx = 0; idx < x.size(); ++idx) out.push_back(ops.binary(BinaryOp::add, x[idx], b[idx % k]));
        break;
      }
      case NodeOp::activation: {
        const auto& x = vals[n.inputs[0]];
        out.reserve(x.size());
        for (const T& v : x) {
          switch (n.activation) {
            case Activation::relu: out.push_back(ops.binary(BinaryOp::max, v, ops.zero())); break;
            case Activation::sigmoid: out.push_back(ops.unary(UnaryFn::sigmoid(), v)); break;
            case Activation::tanh: out.push_back(ops.unary(UnaryFn::tanh(), v)); break;
          }
        }
        break;
      }
      case NodeOp::mse_loss: {
        const auto& p = vals[n.inputs[0]];
        const auto& t = vals[n.inputs[1]];
        T acc = ops.zero();
        for (std::size_t idx = 0; idx < p.size(); ++idx) {
          const T d = ops.binary(BinaryOp::sub, p[idx], t[idx]);
          acc = ops.binary(BinaryOp::add, acc, ops.binary(BinaryOp::mul, d, d));
        }
        out.push_back(ops.binary(BinaryOp::div, acc, ops.constant(static_cast<double>(p.size()))));
        break;
      }
    }
  }
  std::vector<T> result;
  for (NodeId id : outputs_) result.insert(result.end(), vals[id].begin(), vals[id].end());
  return result;
}

std::vector<double> TapeProgram::run_plain(std::span<const double> inputs, FloatFormat format) const {
  return replay(inputs, PlainOps{format});
}

std::vector<Interval> TapeProgram::run_interval(std::span<const Interval> inputs) const {
  return replay(inputs, IntervalOps{});
}

std::vector<Interval> interval_propagate(const Program& prog, std::span<const Interval> inputs) {
  return prog.run_interval(inputs);
}

}  // namespace preciseum
