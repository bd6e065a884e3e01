#pragma once

#include <span>

#include "cone/tensor.hpp"

namespace cone::nn {

inline constexpr double kAdagradEpsilon = 1e-8;

/// Diagonal AdaGrad: acc += g^2, theta -= rho * g / (sqrt(acc) + eps), then grads are zeroed.
/// Frozen parameters are skipped.
void adagrad_step(std::span<Parameter* const> params, double rho, double epsilon = kAdagradEpsilon);

void zero_grads(std::span<Parameter* const> params);

}  // namespace cone::nn
