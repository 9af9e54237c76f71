#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ilsuite/approx/policy.hpp"
#include "ilsuite/dataset/dataset.hpp"
#include "ilsuite/harness/config.hpp"

namespace ilsuite {

struct EvalPoint {
  std::int64_t step = 0;
  double mean_return = 0.0;
  double std_return = 0.0;
};

struct TrainingResult {
  GaussianPolicy policy;
  std::vector<EvalPoint> evaluations;  ///< includes the untrained policy at step 0
  std::int64_t env_steps = 0;          ///< environment steps taken for learning
  double pretrain_seconds = 0.0;
  double train_seconds = 0.0;          ///< excludes pretraining and evaluation
  int reward_calls = 0;
};

struct TrainingHooks {
  std::function<void(const EvalPoint&, const GaussianPolicy&)> on_evaluation;
};

/// Seed used for the fixed evaluation start states of a run.
std::uint64_t evaluation_seed(std::uint64_t run_seed);

/// One complete run. bc: supervised fit only, no environment steps; ppo: RL on
/// the environment reward; gmmil/red/dril: RL against a reward fixed after
/// initialisation; gail/airl/fairl: rollouts, discriminator updates, and PPO
/// interleaved. The environment reward is used only by ppo and by evaluation.
/// `dataset` must be given (already subsampled) for every algorithm except ppo.
TrainingResult run_training(const RunConfig& config, const TrajectoryDataset* dataset,
                            const TrainingHooks& hooks = {});

/// Loads the configured dataset and applies the configured subsampling.
std::optional<TrajectoryDataset> load_training_dataset(const RunConfig& config);

}  // namespace ilsuite
