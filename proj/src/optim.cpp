#include "cone/optim.hpp"

#include <cmath>

#include "cone/error.hpp"

namespace cone::nn {

void adagrad_step(std::span<Parameter* const> params, double rho, double epsilon) {
  if (!(rho > 0.0)) throw Error("learning rate must be positive");
  for (Parameter* p : params) {
    if (!p->trainable) continue;
    auto theta = p->value.data();
    auto g = p->grad.data();
    auto acc = p->accumulator.data();
    for (std::size_t k = 0; k < theta.size(); ++k) {
      if (g[k] == 0.0) continue;
      acc[k] += g[k] * g[k];
      theta[k] -= rho * g[k] / (std::sqrt(acc[k]) + epsilon);
    }
    p->zero_grad();
  }
}

void zero_grads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->zero_grad();
}

}  // namespace cone::nn
