#pragma once

#include "ilsuite/approx/params.hpp"

namespace ilsuite {

struct AdvantageEstimate {
  Vector advantages;
  Vector returns;
};

/// Generalised advantage estimation. delta_t = r_t + gamma V(s_{t+1}) (1 - done_t) - V(s_t),
/// where V(s_{t+1}) is values[t+1], or `bootstrap_value` for the last step.
/// The recursion restarts after every done step. returns = advantages + values.
AdvantageEstimate compute_gae(const Vector& rewards, const Vector& values, const Vector& dones,
                              double bootstrap_value, double gamma = 0.99, double lambda = 0.9);

/// Zero mean, unit (population) standard deviation; all zeros when the input is constant.
Vector normalize_advantages(const Vector& advantages);

}  // namespace ilsuite
