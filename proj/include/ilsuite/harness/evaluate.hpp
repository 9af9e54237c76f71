#pragma once

#include <cstdint>
#include <vector>

#include "ilsuite/approx/policy.hpp"
#include "ilsuite/envsim/env.hpp"

namespace ilsuite {

struct EvalResult {
  std::vector<double> returns;
  double mean = 0.0;
  double std = 0.0;  ///< population standard deviation
};

/// Undiscounted returns of the mean-action policy over `episodes` episodes whose
/// initial states come from `seed`. Uses only the environment's own reward.
EvalResult evaluate(const GaussianPolicy& policy, const EnvSpec& env, int episodes, std::uint64_t seed);

/// Same protocol for the policy that always outputs zero.
EvalResult evaluate_zero_action(const EnvSpec& env, int episodes, std::uint64_t seed);

struct SeedSummary {
  double mean = 0.0;
  double std = 0.0;
  double stderr_ = 0.0;
  std::size_t count = 0;
};

/// Mean, population std, and standard error over per-seed values.
SeedSummary summarize(const std::vector<double>& values);

}  // namespace ilsuite
