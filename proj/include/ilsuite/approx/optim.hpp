#pragma once

#include <cstdint>
#include <vector>

#include "ilsuite/approx/params.hpp"

namespace ilsuite {

/// Adaptive-moment optimiser state. Moment buffers are sized on the first step
/// and must keep matching the parameter layout afterwards.
struct OptimizerState {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  std::vector<Vector> first_moment;
  std::vector<Vector> second_moment;
};

/// One bias-corrected adaptive-moment update of `params` (in place).
/// Throws NumericalError on non-finite gradient entries, leaving params untouched.
void optimizer_step(OptimizerState& state, const ParamViews& params, const ParamViews& grads);

double global_norm(const ParamViews& grads);

/// Rescales `grads` in place so their joint l2 norm is at most `max_norm`.
/// Returns the norm before clipping.
double clip_global_norm(const ParamViews& grads, double max_norm = 0.5);

}  // namespace ilsuite
