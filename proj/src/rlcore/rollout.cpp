#include "ilsuite/rlcore/rollout.hpp"

#include "ilsuite/error.hpp"

namespace ilsuite {

RolloutBuffer::RolloutBuffer(int capacity_) : capacity(capacity_) {}

void RolloutBuffer::reset(int state_dim, int action_dim) {
  if (capacity < 1) throw ConfigError("rollout buffer capacity must be positive");
  size = 0;
  states.setZero(state_dim, capacity);
  actions.setZero(action_dim, capacity);
  env_actions.setZero(action_dim, capacity);
  next_states.setZero(state_dim, capacity);
  log_probs.setZero(capacity);
  values.setZero(capacity);
  rewards.setZero(capacity);
  true_rewards.setZero(capacity);
  dones.setZero(capacity);
  timeout_values.setZero(capacity);
  bootstrap_value = 0.0;
  advantages.resize(0);
  returns.resize(0);
  has_advantages = false;
}

RolloutCollector::RolloutCollector(EnvSpec env_, std::uint64_t seed)
    : env(std::move(env_)), env_rng(derive_rng(seed, 11)), action_rng(derive_rng(seed, 12)) {
  auto reset = env_reset(env, env_rng);
  state = std::move(reset.state);
  observation = std::move(reset.observation);
}

RewardQuery make_query(const RolloutBuffer& buffer) {
  const Eigen::Index n = buffer.size;
  return {buffer.states.leftCols(n), buffer.env_actions.leftCols(n), buffer.next_states.leftCols(n),
          buffer.dones.head(n)};
}

void collect_rollout(const GaussianPolicy& policy, const MlpParams& value_net, RolloutCollector& collector,
                     RolloutBuffer& buffer, const RewardFn& reward_fn) {
  const EnvSpec& env = collector.env;
  buffer.reset(env.state_dim, env.action_dim);
  for (int t = 0; t < buffer.capacity; ++t) {
    const Vector& obs = collector.observation;
    const Vector action = policy_sample(policy, obs, collector.action_rng);
    const Vector applied = clamp_action(env, action);
    StepResult step = env_step(env, collector.state, applied);

    buffer.states.col(t) = obs;
    buffer.actions.col(t) = action;
    buffer.env_actions.col(t) = applied;
    buffer.next_states.col(t) = step.observation;
    buffer.log_probs[t] = policy_log_prob(policy, obs, action);
    buffer.values[t] = mlp_forward_one(value_net, obs)[0];
    buffer.true_rewards[t] = step.reward;
    buffer.dones[t] = step.done ? 1.0 : 0.0;
    if (step.truncated) buffer.timeout_values[t] = mlp_forward_one(value_net, step.observation)[0];
    ++buffer.size;
    ++collector.total_steps;

    if (step.done) {
      ++collector.episodes_finished;
      auto reset = env_reset(env, collector.env_rng);
      collector.state = std::move(reset.state);
      collector.observation = std::move(reset.observation);
    } else {
      collector.state = std::move(step.state);
      collector.observation = std::move(step.observation);
    }
  }
  const int last = buffer.capacity - 1;
  buffer.bootstrap_value =
      buffer.dones[last] > 0.5 ? 0.0 : mlp_forward_one(value_net, buffer.next_states.col(last))[0];

  if (reward_fn) {
    Vector rewards = reward_fn(make_query(buffer));
    if (rewards.size() != buffer.capacity) throw ConfigError("reward provider returned the wrong number of rewards");
    if (!rewards.allFinite()) throw NumericalError("reward provider returned non-finite rewards");
    buffer.rewards = std::move(rewards);
  } else {
    buffer.rewards = buffer.true_rewards;
  }
}

}  // namespace ilsuite
