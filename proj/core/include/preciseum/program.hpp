#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "preciseum/autodiff.hpp"
#include "preciseum/interval.hpp"
#include "preciseum/xarray.hpp"

namespace preciseum {

/// A replayable computation over a flat list of input elements producing a
/// flat list of output elements. Replay is deterministic in every mode.
class Program {
 public:
  virtual ~Program() = default;

  virtual std::size_t input_count() const = 0;
  virtual std::size_t output_count() const = 0;
  /// Plain floating-point replay; results are rounded to `format` after every
  /// operation, as the tracked path does.
  virtual std::vector<double> run_plain(std::span<const double> inputs,
                                        FloatFormat format = FloatFormat::binary64) const = 0;
  /// Outward-rounded interval replay. Throws CapabilityError for operations
  /// without an interval counterpart.
  virtual std::vector<Interval> run_interval(std::span<const Interval> inputs) const = 0;
};

enum class InstructionKind : std::uint8_t { binary, unary, round };

struct Instruction {
  InstructionKind kind = InstructionKind::binary;
  BinaryOp binary = BinaryOp::add;
  UnaryFn unary = UnaryFn::sin();
  RoundMode round = RoundMode::nearest;
  std::size_t lhs = 0;
  std::size_t rhs = 0;
};

/// Straight-line program over scalar registers. Registers 0..inputs-1 hold
/// the inputs; each instruction writes the next register.
class ScalarProgram final : public Program {
 public:
  explicit ScalarProgram(std::size_t inputs) : inputs_(inputs) {}

  std::size_t binary(BinaryOp op, std::size_t lhs, std::size_t rhs);
  std::size_t unary(const UnaryFn& f, std::size_t operand);
  std::size_t round(RoundMode mode, std::size_t operand);
  void mark_output(std::size_t reg);

  std::size_t register_count() const noexcept { return inputs_ + code_.size(); }
  const std::vector<Instruction>& code() const noexcept { return code_; }
  const std::vector<std::size_t>& outputs() const noexcept { return outputs_; }

  std::size_t input_count() const override { return inputs_; }
  std::size_t output_count() const override { return outputs_.size(); }
  /// Precision-tracked replay.
  std::vector<XScalar> run_tracked(std::span<const XScalar> inputs) const;
  std::vector<double> run_plain(std::span<const double> inputs,
                                FloatFormat format = FloatFormat::binary64) const override;
  std::vector<Interval> run_interval(std::span<const Interval> inputs) const override;

 private:
  std::size_t check_register(std::size_t reg) const;
  template <class T, class Ops>
  std::vector<T> replay(std::span<const T> inputs, const Ops& ops) const;

  std::size_t inputs_;
  std::vector<Instruction> code_;
  std::vector<std::size_t> outputs_;
};

/// A recorded tape viewed as a program: the inputs are the elements of all
/// leaves in node order, the outputs are the elements of the chosen nodes.
class TapeProgram final : public Program {
 public:
  TapeProgram(const Tape& tape, std::vector<NodeId> outputs);

  /// Leaf values flattened in input order, with their tracked bits.
  std::vector<XScalar> inputs() const;
  /// The recorded tracked outputs, flattened.
  std::vector<XScalar> tracked_outputs() const;

  std::size_t input_count() const override { return input_count_; }
  std::size_t output_count() const override;
  std::vector<double> run_plain(std::span<const double> inputs,
                                FloatFormat format = FloatFormat::binary64) const override;
  std::vector<Interval> run_interval(std::span<const Interval> inputs) const override;

 private:
  template <class T, class Ops>
  std::vector<T> replay(std::span<const T> inputs, const Ops& ops) const;

  const Tape* tape_;
  std::vector<NodeId> outputs_;
  std::size_t input_count_ = 0;
};

/// Output intervals containing every real result attainable from points in
/// the input intervals.
std::vector<Interval> interval_propagate(const Program& prog, std::span<const Interval> inputs);

}  // namespace preciseum
