#include "cone/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace cone::nn {

namespace {

double evaluate(const LossFn& forward) {
  Tape t;
  return t.value(forward(t))[0];
}

}  // namespace

GradCheckReport grad_check(const LossFn& forward, std::span<Parameter* const> params, double tolerance,
                           const GradCheckOptions& options) {
  GradCheckReport report;
  report.tolerance = tolerance;

  std::vector<Tensor> saved_grads;
  for (Parameter* p : params) {
    saved_grads.push_back(p->grad);
    p->zero_grad();
  }
  {
    Tape t;
    t.backward(forward(t));
    t.accumulate_grads(params);
  }

  for (Parameter* p : params) {
    if (!p->trainable) continue;
    BlockError block{p->name, 0.0, 0};
    auto theta = p->value.data();
    const std::size_t count = theta.size();
    std::size_t stride = 1;
    if (options.max_entries_per_block > 0 && count > options.max_entries_per_block)
      stride = (count + options.max_entries_per_block - 1) / options.max_entries_per_block;
    for (std::size_t k = 0; k < count; k += stride) {
      const double original = theta[k];
      const double h = options.relative_step * std::max(1.0, std::abs(original));
      theta[k] = original + h;
      const double up = evaluate(forward);
      theta[k] = original - h;
      const double down = evaluate(forward);
      theta[k] = original;
      const double numeric = (up - down) / (2.0 * h);
      const double analytic = p->grad[k];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), options.denominator_floor});
      const double rel = std::abs(analytic - numeric) / denom;
      block.max_relative_error = std::max(block.max_relative_error, rel);
      ++block.entries_checked;
    }
    report.max_relative_error = std::max(report.max_relative_error, block.max_relative_error);
    if (block.max_relative_error >= tolerance) report.failures.push_back(block.name);
    report.blocks.push_back(std::move(block));
  }

  for (std::size_t i = 0; i < params.size(); ++i) params[i]->grad = std::move(saved_grads[i]);
  return report;
}

}  // namespace cone::nn
