#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "absa/core/tensor.hpp"

namespace absa::core {

class Tape;

/// Handle to a tensor recorded on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;

  bool valid() const noexcept { return tape_ != nullptr; }
  std::size_t id() const noexcept { return id_; }
  Tape* tape() const noexcept { return tape_; }

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  /// Gradient after Tape::backward; zeros when the loss does not depend on this tensor.
  const Tensor& grad() const;
  bool requires_grad() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Records operations in execution order and replays them in reverse to
/// accumulate gradients. Nodes live in a deque so references to values stay
/// valid as new operations are appended.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, const Tensor& out_grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  /// Trainable leaf owned by the tape. Its gradient persists across backward calls.
  Var variable(Tensor value);
  /// Leaf aliasing an external parameter; backward accumulates into `p.grad`.
  Var parameter(Parameter& p);

  /// Appends an operation output. A backward function is kept only when some
  /// input requires a gradient.
  Var record(std::string_view op, Tensor value, const std::vector<Var>& inputs, BackwardFn backward);

  /// Seeds d(loss)/d(loss) = 1 and runs every recorded operation that
  /// received gradient exactly once, newest first. Leaf gradients accumulate
  /// across calls; intermediate gradients are reset on each call.
  void backward(const Var& loss);

  const Tensor& value(std::size_t id) const;
  bool requires_grad(std::size_t id) const;
  /// Mutable gradient of node `id`, allocated as zeros on first access.
  Tensor& grad(std::size_t id);
  std::string_view op_name(std::size_t id) const;
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    std::string op;
    Tensor owned;
    Parameter* param = nullptr;
    Tensor grad;
    bool leaf = false;
    bool requires_grad = false;
    BackwardFn backward;
  };

  void check_owned(const Var& v) const;

  std::deque<Node> nodes_;
};

}  // namespace absa::core
