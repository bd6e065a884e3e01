#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "cone/tensor.hpp"

namespace cone::nn {

/// Handle to a value recorded on a Tape. Only meaningful for the tape that issued it.
struct Var {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::size_t id = kNone;

  bool valid() const { return id != kNone; }
};

class Tape;

/// Propagates grad(self) into the grads of the node's inputs.
using BackwardFn = std::function<void(Tape&, Var self)>;

/// Reverse-mode recording of one forward pass.
///
/// Nodes are appended in evaluation order; backward() walks them in exact
/// reverse and may run once. Inputs of a recorded op must not be referenced
/// after the op's own record() call returns (the node store may reallocate).
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);

  /// Binds a parameter as a leaf aliasing its value; binding the same parameter
  /// twice returns the same Var. The parameter must outlive the tape.
  Var parameter(const Parameter& p);

  Var record(Tensor value, BackwardFn backward);

  const Tensor& value(Var v) const;

  /// Gradient buffer of v, zero-initialized on first access.
  Tensor& grad(Var v);
  bool has_grad(Var v) const { return nodes_[v.id].grad_ready; }

  /// Seeds d(loss)/d(loss) = 1 and runs every backward function in reverse order.
  void backward(Var loss);

  /// Adds the gradients collected at parameter leaves into Parameter::grad of
  /// each trainable parameter in `params`. Call after backward().
  void accumulate_grads(std::span<Parameter* const> params) const;

  std::size_t size() const { return nodes_.size(); }
  bool finished() const { return finished_; }

 private:
  struct Node {
    Tensor value;
    const Tensor* external = nullptr;  // parameter leaves alias the parameter value
    Tensor grad;
    bool grad_ready = false;
    BackwardFn backward;
  };

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, std::size_t> bound_;
  bool finished_ = false;
};

}  // namespace cone::nn
