#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cone/tape.hpp"

namespace cone::nn {

/// Builds the scalar loss on a fresh tape from the current parameter values.
using LossFn = std::function<Var(Tape&)>;

struct BlockError {
  std::string name;
  double max_relative_error = 0.0;
  std::size_t entries_checked = 0;
};

struct GradCheckReport {
  std::vector<BlockError> blocks;  // trainable blocks only
  double max_relative_error = 0.0;
  double tolerance = 0.0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

struct GradCheckOptions {
  double relative_step = 1e-4;  // h = relative_step * max(1, |theta|)
  // Denominator floor for |analytic - numeric| / max(|analytic|, |numeric|, floor),
  // so exactly-zero gradients compare in absolute terms.
  double denominator_floor = 1e-7;
  std::size_t max_entries_per_block = 0;  // 0 checks every entry
};

/// Central finite differences against tape gradients, block by block.
/// Parameter values and grads are restored afterwards.
GradCheckReport grad_check(const LossFn& forward, std::span<Parameter* const> params, double tolerance,
                           const GradCheckOptions& options = {});

}  // namespace cone::nn
