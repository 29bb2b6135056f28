#include "preciseum/autodiff.hpp"

#include <string>

#include "preciseum/matmul.hpp"
#include "preciseum/reduce.hpp"

namespace preciseum {

namespace {

XArray exact_filled(const Shape& shape, double v, FloatFormat f) {
  return XArray::filled(shape, XScalar::from_exact(v, f));
}

XArray negate(const XArray& a) {
  return map_binary(BinaryOp::sub, exact_filled({}, 0.0, a.format()), a);
}

}  // namespace

XArray apply_activation(Activation f, const XArray& x) {
  switch (f) {
    case Activation::relu: return map_binary(BinaryOp::max, x, exact_filled({}, 0.0, x.format()));
    case Activation::sigmoid: return map_unary(UnaryFn::sigmoid(), x);
    case Activation::tanh: return map_unary(UnaryFn::tanh(), x);
  }
  return x;
}

XArray activation_derivative(Activation f, const XArray& input, const XArray& output) {
  const FloatFormat fmt = input.format();
  switch (f) {
    case Activation::relu: {
      std::vector<double> mask(input.size());
      for (std::size_t k = 0; k < input.size(); ++k) mask[k] = input.values()[k] > 0.0 ? 1.0 : 0.0;
      return XArray::from_exact(input.shape(), std::move(mask), fmt);
    }
    case Activation::sigmoid: {
      const XArray one_minus = map_binary(BinaryOp::sub, exact_filled({}, 1.0, fmt), output);
      return map_binary(BinaryOp::mul, output, one_minus);
    }
    case Activation::tanh: {
      const XArray square = map_binary(BinaryOp::mul, output, output);
      return map_binary(BinaryOp::sub, exact_filled({}, 1.0, fmt), square);
    }
  }
  return output;
}

NodeId Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

const Node& Tape::node(NodeId id) const {
  if (id >= nodes_.size()) throw RangeError("node id " + std::to_string(id) + " is not on the tape");
  return nodes_[id];
}

const XArray& Tape::value(NodeId id) const { return node(id).output; }

NodeId Tape::leaf(XArray value) {
  Node n;
  n.output = std::move(value);
  return push(std::move(n));
}

NodeId Tape::matmul(NodeId a, NodeId b) {
  const XArray& av = value(a);
  const XArray& bv = value(b);
  Node n;
  n.op = NodeOp::matmul;
  n.inputs = {a, b};
  n.output = preciseum::matmul(av, bv, Estimator::v2());
  n.recorded_inputs = {av, bv};
  return push(std::move(n));
}

NodeId Tape::add_bias(NodeId x, NodeId b) {
  const XArray& xv = value(x);
  const XArray& bv = value(b);
  if (xv.rank() != 2 || bv.rank() != 1 || bv.shape()[0] != xv.shape()[1]) {
    throw ShapeError("add_bias needs a batch x k array and a length-k bias");
  }
  Node n;
  n.op = NodeOp::add_bias;
  n.inputs = {x, b};
  n.output = map_binary(BinaryOp::add, xv, bv);
  n.recorded_inputs = {xv, bv};
  return push(std::move(n));
}

NodeId Tape::forward_linear(NodeId x, NodeId w, NodeId b) { return add_bias(matmul(x, w), b); }

NodeId Tape::forward_activation(Activation f, NodeId x) {
  const XArray& xv = value(x);
  Node n;
  n.op = NodeOp::activation;
  n.activation = f;
  n.inputs = {x};
  n.output = apply_activation(f, xv);
  n.recorded_inputs = {xv};
  return push(std::move(n));
}

NodeId Tape::mse_loss(NodeId pred, NodeId target) {
  const XArray& p = value(pred);
  const XArray& t = value(target);
  if (p.shape() != t.shape()) throw ShapeError("mse_loss needs equal shapes");
  if (p.size() == 0) throw ShapeError("mse_loss of empty arrays");
  const XArray diff = map_binary(BinaryOp::sub, p, t);
  Node n;
  n.op = NodeOp::mse_loss;
  n.inputs = {pred, target};
  n.output = mean(map_binary(BinaryOp::mul, diff, diff));
  n.recorded_inputs = {p, t};
  return push(std::move(n));
}

Gradients backward(const Tape& tape, NodeId output, const XArray& seed) {
  const XArray& out = tape.value(output);
  if (seed.shape() != out.shape()) throw ShapeError("seed shape differs from the output shape");
  Gradients grads(tape.size());
  grads[output] = seed;

  auto accumulate = [&](NodeId id, XArray g) {
    if (grads[id]) {
      grads[id] = map_binary(BinaryOp::add, *grads[id], g);
    } else {
      grads[id] = std::move(g);
    }
  };

  for (NodeId id = output + 1; id-- > 0;) {
    if (!grads[id]) continue;
    const Node& n = tape.node(id);
    const XArray& g = *grads[id];
    switch (n.op) {
      case NodeOp::leaf: break;
      case NodeOp::matmul: {
        const XArray& a = n.recorded_inputs[0];
        const XArray& b = n.recorded_inputs[1];
        accumulate(n.inputs[0], matmul(g, b.transpose(), Estimator::v2()));
        accumulate(n.inputs[1], matmul(a.transpose(), g, Estimator::v2()));
        break;
      }
      case NodeOp::add_bias:
        accumulate(n.inputs[0], g);
        accumulate(n.inputs[1], sum_reduce(g, 0));
        break;
      case NodeOp::activation:
        accumulate(n.inputs[0],
                   map_binary(BinaryOp::mul, g,
                              activation_derivative(n.activation, n.recorded_inputs[0], n.output)));
        break;
      case NodeOp::mse_loss: {
        const XArray& p = n.recorded_inputs[0];
        const XArray& t = n.recorded_inputs[1];
        const FloatFormat f = p.format();
        const XScalar factor = XScalar::from_exact(2.0, f) /
                               XScalar::from_exact(static_cast<double>(p.size()), f);
        const XArray scale = map_binary(BinaryOp::mul, g, XArray::scalar(factor));
        const XArray dp = map_binary(BinaryOp::mul, map_binary(BinaryOp::sub, p, t), scale);
        accumulate(n.inputs[1], negate(dp));
        accumulate(n.inputs[0], dp);
        break;
      }
    }
  }
  return grads;
}

std::vector<XArray> sgd_step(const std::vector<XArray>& params, const std::vector<XArray>& grads,
                             const XScalar& lr) {
  if (params.size() != grads.size()) throw ShapeError("sgd_step needs one gradient per parameter");
  std::vector<XArray> out;
  out.reserve(params.size());
  const XArray rate = XArray::scalar(lr);
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k].shape() != grads[k].shape()) {
      throw ShapeError("gradient shape differs from parameter shape");
    }
    out.push_back(map_binary(BinaryOp::sub, params[k], map_binary(BinaryOp::mul, rate, grads[k])));
  }
  return out;
}

}  // namespace preciseum
