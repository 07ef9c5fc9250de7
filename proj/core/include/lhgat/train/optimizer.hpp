#pragma once

#include <span>
#include <vector>

#include "lhgat/encoder/encoder.hpp"

namespace lhgat::train {

struct OptimizerState {
  std::vector<std::vector<double>> velocity;
};

OptimizerState make_optimizer_state(const std::vector<encoder::NamedTensor>& params);

// v <- momentum * v + g; theta <- theta - lr * v.
void sgd_momentum_update(std::span<double> param, std::span<const double> grad, std::span<double> velocity,
                         double lr, double momentum);

// Rescales all gradients together so their joint L2 norm is at most
// `max_norm` (no-op when max_norm is 0). Returns the norm before rescaling.
double clip_gradients(const std::vector<encoder::NamedTensor>& params, double max_norm);

// Applies the update to every parameter from its accumulated grad buffer.
void sgd_momentum_step(const std::vector<encoder::NamedTensor>& params, OptimizerState& state, double lr,
                       double momentum);

}  // namespace lhgat::train
