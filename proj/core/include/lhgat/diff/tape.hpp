#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lhgat/diff/tensor.hpp"

namespace lhgat::diff {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  const Tensor& value() const;
  const Shape& shape() const { return value().shape; }
  double item() const { return value().item(); }
  bool needs_grad() const;

  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// What a primitive's backward rule sees. `input_grads[k]` is null when input k
// does not lead to any trainable leaf.
struct BackwardContext {
  const Tensor& output;
  std::span<const double> grad_output;
  std::span<const Tensor* const> inputs;
  std::span<std::vector<double>* const> input_grads;
};

using BackwardFn = std::function<void(const BackwardContext&)>;

// Linear record of executed primitives for reverse-mode differentiation.
// Nodes are appended in execution order; backward walks them in reverse and
// sums gradients arriving at shared inputs.
class Tape {
 public:
  // With track_gradients off, bound parameters behave as constants and no
  // backward rules are recorded.
  explicit Tape(bool track_gradients = true) : track_gradients_(track_gradients) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // A value that never receives gradient.
  Var constant(Tensor value);
  // Binds a parameter. Repeated calls with the same tensor return the same node.
  // When backward runs, the node's gradient is added into `param.grad`.
  Var param(Tensor& param);

  Var record(Tensor value, std::vector<Var> inputs, BackwardFn backward);

  // Requires a one-element loss recorded on this tape.
  void backward(Var loss);

  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  bool needs_grad(std::size_t id) const { return nodes_[id].needs_grad; }
  std::size_t size() const { return nodes_.size(); }
  // Number of times a backward rule ran during the last backward pass.
  std::size_t backward_steps() const { return backward_steps_; }
  // Ids of nodes in the order their backward rules ran.
  const std::vector<std::size_t>& backward_order() const { return backward_order_; }

 private:
  struct Node {
    Tensor value;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    Tensor* leaf = nullptr;
    bool needs_grad = false;
  };

  std::vector<Node> nodes_;
  std::unordered_map<const Tensor*, std::size_t> bound_params_;
  bool track_gradients_ = true;
  std::size_t backward_steps_ = 0;
  std::vector<std::size_t> backward_order_;
};

inline void backward(Var loss) { loss.tape().backward(loss); }

}  // namespace lhgat::diff
