#include "ilsuite/dataset/dataset.hpp"

#include <cmath>

#include "ilsuite/error.hpp"

namespace ilsuite {

Transition TrajectoryDataset::transition(std::size_t i) const {
  Transition t;
  t.state.assign(states.begin() + i * state_dim, states.begin() + (i + 1) * state_dim);
  t.action.assign(actions.begin() + i * action_dim, actions.begin() + (i + 1) * action_dim);
  t.reward = rewards[i];
  t.next_state.assign(next_states.begin() + i * state_dim, next_states.begin() + (i + 1) * state_dim);
  t.terminal = terminals[i] != 0;
  return t;
}

void TrajectoryDataset::append_trajectory(const std::vector<Transition>& trajectory) {
  if (trajectory.empty()) throw ConfigError("append_trajectory: empty trajectory");
  for (const auto& t : trajectory) {
    if (t.state.size() != state_dim || t.next_state.size() != state_dim || t.action.size() != action_dim)
      throw ConfigError("append_trajectory: transition dimensions do not match dataset");
    states.insert(states.end(), t.state.begin(), t.state.end());
    actions.insert(actions.end(), t.action.begin(), t.action.end());
    rewards.push_back(t.reward);
    next_states.insert(next_states.end(), t.next_state.begin(), t.next_state.end());
    terminals.push_back(t.terminal ? 1 : 0);
  }
  trajectory_ends.push_back(rewards.size());
}

void TrajectoryDataset::check_consistent() const {
  const std::size_t n = rewards.size();
  if (states.size() != n * state_dim || next_states.size() != n * state_dim || actions.size() != n * action_dim ||
      terminals.size() != n)
    throw FormatError("dataset: array lengths inconsistent with dimensions");
  std::uint64_t previous = 0;
  for (std::uint64_t end : trajectory_ends) {
    if (end <= previous && !(end == 0 && previous == 0 && n == 0))
      throw FormatError("dataset: trajectory boundaries must be strictly increasing");
    previous = end;
  }
  if (previous != n) throw FormatError("dataset: trajectory boundaries do not cover every transition");
}

ExpertView expert_view(const TrajectoryDataset& dataset) {
  const auto n = static_cast<Eigen::Index>(dataset.size());
  const auto s = static_cast<Eigen::Index>(dataset.state_dim);
  const auto a = static_cast<Eigen::Index>(dataset.action_dim);
  ExpertView view;
  view.states = Eigen::Map<const Eigen::MatrixXf>(dataset.states.data(), s, n).cast<double>();
  view.actions = Eigen::Map<const Eigen::MatrixXf>(dataset.actions.data(), a, n).cast<double>();
  view.next_states = Eigen::Map<const Eigen::MatrixXf>(dataset.next_states.data(), s, n).cast<double>();
  view.terminals = Vector(n);
  for (Eigen::Index i = 0; i < n; ++i) view.terminals[i] = dataset.terminals[static_cast<std::size_t>(i)];
  return view;
}

namespace {

std::vector<float> to_float(const Vector& v) {
  std::vector<float> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = static_cast<float>(v[i]);
  return out;
}

}  // namespace

TrajectoryDataset record_expert(const GaussianPolicy& policy, const EnvSpec& env, int episodes, Rng& rng,
                                bool deterministic) {
  if (episodes < 1) throw ConfigError("record_expert: episodes must be positive");
  if (policy.state_dim() != env.state_dim || policy.action_dim() != env.action_dim)
    throw ConfigError("record_expert: policy does not match environment dimensions");
  TrajectoryDataset dataset;
  dataset.env_name = env.name;
  dataset.state_dim = static_cast<std::uint32_t>(env.state_dim);
  dataset.action_dim = static_cast<std::uint32_t>(env.action_dim);
  for (int e = 0; e < episodes; ++e) {
    auto [state, obs] = env_reset(env, rng);
    std::vector<Transition> trajectory;
    bool done = false;
    while (!done) {
      const Vector action = deterministic ? policy_mode(policy, obs) : policy_sample(policy, obs, rng);
      const Vector applied = clamp_action(env, action);
      StepResult step = env_step(env, state, applied);
      Transition t;
      t.state = to_float(obs);
      t.action = to_float(applied);
      t.reward = static_cast<float>(step.reward);
      t.next_state = to_float(step.observation);
      t.terminal = step.done;
      trajectory.push_back(std::move(t));
      state = std::move(step.state);
      obs = std::move(step.observation);
      done = step.done;
    }
    dataset.append_trajectory(trajectory);
  }
  return dataset;
}

TrajectoryDataset subsample(const TrajectoryDataset& dataset, int rate) {
  if (rate < 1) throw ConfigError("subsample: rate must be at least 1");
  TrajectoryDataset out;
  out.env_name = dataset.env_name;
  out.state_dim = dataset.state_dim;
  out.action_dim = dataset.action_dim;
  out.subsample_rate = dataset.subsample_rate * static_cast<std::uint32_t>(rate);
  for (std::size_t t = 0; t < dataset.trajectory_count(); ++t) {
    std::vector<Transition> kept;
    for (std::size_t i = dataset.trajectory_begin(t); i < dataset.trajectory_ends[t]; i += rate)
      kept.push_back(dataset.transition(i));
    out.append_trajectory(kept);
  }
  return out;
}

TrajectoryDataset strip_rewards(const TrajectoryDataset& dataset) {
  TrajectoryDataset out = dataset;
  for (float& r : out.rewards) r = std::nanf("");
  return out;
}

DatasetStats dataset_stats(const TrajectoryDataset& dataset) {
  if (dataset.trajectory_count() == 0) throw ConfigError("dataset_stats: dataset has no trajectories");
  std::vector<double> returns;
  for (std::size_t t = 0; t < dataset.trajectory_count(); ++t) {
    double total = 0.0;
    for (std::size_t i = dataset.trajectory_begin(t); i < dataset.trajectory_ends[t]; ++i) {
      if (std::isnan(dataset.rewards[i])) throw ConfigError("dataset_stats: dataset has no recorded rewards");
      total += dataset.rewards[i];
    }
    returns.push_back(total);
  }
  DatasetStats stats;
  stats.trajectories = returns.size();
  for (double r : returns) stats.mean_return += r;
  stats.mean_return /= static_cast<double>(returns.size());
  double var = 0.0;
  for (double r : returns) var += (r - stats.mean_return) * (r - stats.mean_return);
  stats.std_return = std::sqrt(var / static_cast<double>(returns.size()));
  return stats;
}

}  // namespace ilsuite
