#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "preciseum/xarray.hpp"

namespace preciseum {

enum class Activation : std::uint8_t { relu, sigmoid, tanh };

enum class NodeOp : std::uint8_t { leaf, matmul, add_bias, activation, mse_loss };

using NodeId = std::size_t;

struct Node {
  NodeOp op = NodeOp::leaf;
  Activation activation = Activation::relu;  // only for NodeOp::activation
  std::vector<NodeId> inputs;
  /// Copies of the input values at recording time.
  std::vector<XArray> recorded_inputs;
  XArray output;
};

/// Reverse-mode tape for small dense networks. Nodes are appended in
/// evaluation order, so every input id is smaller than the node's own id.
/// Forward results are computed with precision tracking while recording;
/// matmuls use the V2 estimator.
class Tape {
 public:
  NodeId leaf(XArray value);
  NodeId matmul(NodeId a, NodeId b);
  /// x (batch x k) plus a bias vector b (k), broadcast over rows.
  NodeId add_bias(NodeId x, NodeId b);
  /// matmul(x, W) followed by add_bias(., b).
  NodeId forward_linear(NodeId x, NodeId w, NodeId b);
  NodeId forward_activation(Activation f, NodeId x);
  /// Mean of squared differences; the output is rank 0.
  NodeId mse_loss(NodeId pred, NodeId target);

  const XArray& value(NodeId id) const;
  const Node& node(NodeId id) const;
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  NodeId push(Node node);
  std::vector<Node> nodes_;
};

/// Gradient per node; empty for nodes the output does not depend on.
using Gradients = std::vector<std::optional<XArray>>;

/// Reverse sweep from `output` seeded with `seed` (same shape as the output).
/// Matmul nodes give dA = matmul(G, B^T) and dB = matmul(A^T, G) with the V2
/// estimator; elementwise nodes use the tracked chain rule; several
/// consumers of one node accumulate with the tracked add in decreasing
/// consumer order.
Gradients backward(const Tape& tape, NodeId output, const XArray& seed);

/// Derivative of an activation expressed through its output y = f(x):
/// relu' from the input sign, sigmoid' = y (1 - y), tanh' = 1 - y^2.
XArray activation_derivative(Activation f, const XArray& input, const XArray& output);

XArray apply_activation(Activation f, const XArray& x);

/// p - lr * g for every parameter, with full precision tracking.
std::vector<XArray> sgd_step(const std::vector<XArray>& params, const std::vector<XArray>& grads,
                             const XScalar& lr);

}  // namespace preciseum
