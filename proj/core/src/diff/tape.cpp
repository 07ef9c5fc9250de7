#include "lhgat/diff/tape.hpp"

#include "lhgat/errors.hpp"

namespace lhgat::diff {

const Tensor& Var::value() const { return tape_->value(id_); }

bool Var::needs_grad() const { return tape_->needs_grad(id_); }

Var Tape::constant(Tensor value) {
  Node node;
  node.value = std::move(value);
  node.value.requires_grad = false;
  node.value.grad.reset();
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::param(Tensor& param) {
  if (auto it = bound_params_.find(&param); it != bound_params_.end()) {
    return Var(this, it->second);
  }
  Node node;
  node.value = Tensor(param.shape, param.data);
  node.leaf = &param;
  node.needs_grad = track_gradients_ && param.requires_grad;
  nodes_.push_back(std::move(node));
  bound_params_.emplace(&param, nodes_.size() - 1);
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Tensor value, std::vector<Var> inputs, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  node.inputs.reserve(inputs.size());
  for (const Var& in : inputs) {
    if (&in.tape() != this) throw ContractError("operand recorded on a different tape");
    node.inputs.push_back(in.id());
    node.needs_grad = node.needs_grad || nodes_[in.id()].needs_grad;
  }
  if (node.needs_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

void Tape::backward(Var loss) {
  if (&loss.tape() != this) throw ContractError("loss recorded on a different tape");
  const std::size_t root = loss.id();
  if (nodes_[root].value.size() != 1) {
    throw ContractError("backward requires a scalar loss, got shape " +
                        to_string(nodes_[root].value.shape));
  }
  backward_steps_ = 0;
  backward_order_.clear();

  std::vector<std::vector<double>> grads(root + 1);
  grads[root].assign(1, 1.0);

  std::vector<const Tensor*> in_values;
  std::vector<std::vector<double>*> in_grads;
  for (std::size_t id = root + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (!node.needs_grad || grads[id].empty()) continue;
    if (node.backward) {
      in_values.clear();
      in_grads.clear();
      for (std::size_t in : node.inputs) {
        in_values.push_back(&nodes_[in].value);
        if (nodes_[in].needs_grad) {
          if (grads[in].empty()) grads[in].assign(nodes_[in].value.size(), 0.0);
          in_grads.push_back(&grads[in]);
        } else {
          in_grads.push_back(nullptr);
        }
      }
      node.backward(BackwardContext{node.value, grads[id], in_values, in_grads});
      ++backward_steps_;
      backward_order_.push_back(id);
    }
    if (node.leaf != nullptr) {
      Tensor& leaf = *node.leaf;
      if (!leaf.grad || leaf.grad->size() != leaf.data.size()) {
        leaf.grad.emplace(leaf.data.size(), 0.0);
      }
      for (std::size_t k = 0; k < grads[id].size(); ++k) (*leaf.grad)[k] += grads[id][k];
    }
  }
}

}  // namespace lhgat::diff
