#pragma once

#include <functional>

#include "ilsuite/approx/policy.hpp"
#include "ilsuite/envsim/env.hpp"

namespace ilsuite {

/// Reward-free batch of agent transitions; the only thing a reward provider sees.
/// Actions are the bounded actions actually applied to the environment.
struct RewardQuery {
  Matrix states;
  Matrix actions;
  Matrix next_states;
  Vector terminals;

  Eigen::Index size() const { return states.cols(); }
};

/// On-policy batch for PPO. Columns are time steps in collection order.
struct RolloutBuffer {
  int capacity = 0;
  int size = 0;
  Matrix states;
  Matrix actions;      ///< raw policy samples (used for log-densities)
  Matrix env_actions;  ///< actions after clamping to the environment bounds
  Matrix next_states;
  Vector log_probs;
  Vector values;
  Vector rewards;       ///< rewards used for learning
  Vector true_rewards;  ///< environment reward, never exposed through RewardQuery
  Vector dones;         ///< 1 where an episode ended at this step
  Vector timeout_values;  ///< V(s_T) where an episode was cut by the horizon, else 0
  double bootstrap_value = 0.0;
  Vector advantages;
  Vector returns;
  bool has_advantages = false;

  explicit RolloutBuffer(int capacity = 0);
  void reset(int state_dim, int action_dim);
  bool full() const { return size == capacity; }
};

/// Environment handle that carries episodes across rollout boundaries.
struct RolloutCollector {
  EnvSpec env;
  EnvState state;
  Vector observation;
  Rng env_rng;
  Rng action_rng;
  std::int64_t total_steps = 0;
  std::int64_t episodes_finished = 0;

  RolloutCollector(EnvSpec env, std::uint64_t seed);
};

RewardQuery make_query(const RolloutBuffer& buffer);

/// Maps a reward-free batch to one reward per transition.
using RewardFn = std::function<Vector(const RewardQuery&)>;

/// Fills `buffer` with exactly `capacity` steps. When `reward_fn` is empty the
/// environment reward is used (plain RL); otherwise the rewards come from it.
/// A final episode cut by the buffer boundary is bootstrapped with V(s_next);
/// episodes cut by the horizon record V(s_T) in `timeout_values`.
void collect_rollout(const GaussianPolicy& policy, const MlpParams& value_net, RolloutCollector& collector,
                     RolloutBuffer& buffer, const RewardFn& reward_fn = {});

}  // namespace ilsuite
