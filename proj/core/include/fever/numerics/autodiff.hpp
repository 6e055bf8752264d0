#pragma once

// Tape-based reverse-mode automatic differentiation over Tensor values.
//
// A forward pass records one node per operation on a Tape. Calling
// Tape::backward on a scalar node walks the tape in reverse, pushing
// gradients into every reachable node; parameter leaves accumulate directly
// into Parameter::grad. The tape is cleared by backward, so a second call
// on the same loss raises StaleTapeError.
//
// Parameters that are only read (inference) may be shared between threads,
// each thread building its own Tape.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fever/numerics/tensor.hpp"

namespace fever::num {

/// A named trainable value with its accumulated gradient. An empty grad
/// means "never initialized" (no zero_grad and no backward has touched it).
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  bool grad_initialized() const noexcept { return !grad.empty(); }
  void zero_grad() {
    if (grad.same_shape(value)) {
      grad.fill(0.0);
    } else {
      grad = Tensor(value.rows(), value.cols());
    }
  }
};

class Tape;

/// Handle to a node on a Tape.
struct Var {
  Tape* tape = nullptr;
  std::uint32_t id = 0;
  std::uint64_t generation = 0;

  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
};

class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::uint32_t self)>;

  Tape() { nodes_.reserve(64); }
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf holding a copy of `value`; gradients flowing into it are dropped.
  Var constant(Tensor value);
  /// Leaf reading `p.value` in place; backward accumulates into `p.grad`.
  Var param(Parameter& p);
  /// Read-only leaf over `p.value`; no gradient is recorded for it.
  Var param(const Parameter& p);
  /// Records an interior node.
  Var record(Tensor value, BackwardFn backward);

  const Tensor& value(std::uint32_t id) const;
  /// Gradient of node `id` (zero-filled on first access during backward).
  Tensor& grad(std::uint32_t id);
  /// True when the node's gradient has been touched during this backward.
  bool has_grad(std::uint32_t id) const;

  /// Seeds d(loss)/d(loss) = `seed` and propagates. `loss` must be 1×1.
  void backward(const Var& loss, double seed = 1.0);
  void clear();

  std::size_t size() const noexcept { return nodes_.size(); }
  std::uint64_t generation() const noexcept { return generation_; }

 private:
  struct Node {
    Tensor own;
    const Parameter* source = nullptr;
    Parameter* trainable = nullptr;
    Tensor grad;
    BackwardFn backward;
  };

  std::vector<Node> nodes_;
  std::uint64_t generation_ = 1;
};

enum class Activation { none, rectifier };

namespace ops {

Var matmul(const Var& a, const Var& b);
Var transpose(const Var& a);
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var abs(const Var& a);
Var relu(const Var& a);
Var scale(const Var& a, double factor);
/// Sum of all entries, as a 1×1 node.
Var sum(const Var& a);
/// act(W·x + b) applied to every column of x.
Var affine(const Var& x, const Var& W, const Var& b, Activation act);
/// Stacks inputs vertically; all inputs must have equal column count.
Var concat_rows(std::span<const Var> parts);
/// Column-wise softmax with max subtraction.
Var softmax_col(const Var& a);
/// Row-wise max over columns; ties route gradient to the first column.
Var maxpool_row(const Var& a);
/// −log softmax(logits)[gold] for a c×1 logit column.
Var cross_entropy(const Var& logits, std::size_t gold);
/// Selects rows of a (V×d) table as columns of a d×n result. A negative id
/// yields a zero column that receives no gradient.
Var gather_columns(const Var& table, std::span<const int> ids);

}  // namespace ops

/// Softmax of a single column, used for reporting probabilities outside a tape.
std::vector<double> softmax(std::span<const double> logits);

}  // namespace fever::num
