#include "lhgat/train/optimizer.hpp"

#include <cmath>

#include "lhgat/errors.hpp"

namespace lhgat::train {

OptimizerState make_optimizer_state(const std::vector<encoder::NamedTensor>& params) {
  OptimizerState state;
  for (const auto& [name, t] : params) state.velocity.emplace_back(t->size(), 0.0);
  return state;
}

void sgd_momentum_update(std::span<double> param, std::span<const double> grad, std::span<double> velocity,
                         double lr, double momentum) {
  if (param.size() != grad.size() || param.size() != velocity.size()) {
    throw DimensionError("sgd update: parameter, gradient and velocity sizes differ");
  }
  for (std::size_t i = 0; i < param.size(); ++i) {
    velocity[i] = momentum * velocity[i] + grad[i];
    param[i] -= lr * velocity[i];
  }
}

double clip_gradients(const std::vector<encoder::NamedTensor>& params, double max_norm) {
  double sq = 0.0;
  for (const auto& [name, t] : params) {
    if (!t->grad) continue;
    for (double g : *t->grad) sq += g * g;
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double factor = max_norm / norm;
    for (const auto& [name, t] : params) {
      if (!t->grad) continue;
      for (double& g : *t->grad) g *= factor;
    }
  }
  return norm;
}

void sgd_momentum_step(const std::vector<encoder::NamedTensor>& params, OptimizerState& state, double lr,
                       double momentum) {
  if (state.velocity.size() != params.size()) {
    throw DimensionError("optimizer state holds " + std::to_string(state.velocity.size()) +
                         " buffers for " + std::to_string(params.size()) + " parameters");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    diff::Tensor& p = *params[k].second;
    if (state.velocity[k].size() != p.size()) {
      throw DimensionError("velocity for " + params[k].first + " does not match its shape");
    }
    if (p.grad && p.grad->size() == p.size()) {
      sgd_momentum_update(p.data, *p.grad, state.velocity[k], lr, momentum);
    } else {
      const std::vector<double> zero(p.size(), 0.0);
      sgd_momentum_update(p.data, zero, state.velocity[k], lr, momentum);
    }
  }
}

}  // namespace lhgat::train
