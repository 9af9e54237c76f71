#pragma once

#include <cstdint>
#include <memory>

#include "ilsuite/ilrewards/provider.hpp"

namespace ilsuite {

/// Dropout BC policy whose mask draws stand in for an ensemble of policies.
struct DropoutEnsemble {
  GaussianPolicy policy;
  int ensemble_size = 8;
  double quantile = 0.98;
  double threshold = 0.0;  ///< q, set by dril_pretrain
  bool ready = false;
  DrilStatistic statistic = DrilStatistic::mean_action_variance;
};

/// The ceil(p n)-th smallest value (1-based), clamped to [1, n].
double quantile_order_statistic(std::vector<double> values, double p);

/// Disagreement per column across `ensemble_size` dropout draws seeded by `seed`:
/// mean-action variance summed over action dimensions, or the variance of the
/// members' densities at the given action.
Vector dril_uncertainty(const DropoutEnsemble& ensemble, const Matrix& states, const Matrix& actions,
                        std::uint64_t seed);

struct DrilTrainConfig {
  int epochs = 25;
  double learning_rate = 3e-4;
  int minibatch = 64;
  double max_grad_norm = 0.5;
  std::uint64_t mask_seed = 0;
};

/// BC with dropout active, then q = quantile of the expert uncertainty under `mask_seed`.
void dril_pretrain(DropoutEnsemble& ensemble, const ExpertView& expert, const DrilTrainConfig& config, Rng& rng);

/// +1 where uncertainty <= q, -1 otherwise.
Vector dril_rewards(const DropoutEnsemble& ensemble, const Matrix& states, const Matrix& actions,
                    std::uint64_t seed);
double dril_reward_from_uncertainty(double uncertainty, double threshold);

std::unique_ptr<RewardProvider> make_dril_provider(const ExpertView& expert, const ProviderConfig& config);

}  // namespace ilsuite
