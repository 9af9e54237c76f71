#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ilsuite/approx/policy.hpp"
#include "ilsuite/envsim/env.hpp"

namespace ilsuite {

struct Transition {
  std::vector<float> state;
  std::vector<float> action;
  float reward = 0.0f;  ///< true reward; statistics only
  std::vector<float> next_state;
  bool terminal = false;
};

/// Expert experience stored as flat single-precision arrays, transition-major.
/// trajectory_ends holds the exclusive end index of each trajectory.
struct TrajectoryDataset {
  std::string env_name;
  std::uint32_t state_dim = 0;
  std::uint32_t action_dim = 0;
  std::uint32_t subsample_rate = 1;
  std::vector<float> states;
  std::vector<float> actions;
  std::vector<float> rewards;
  std::vector<float> next_states;
  std::vector<std::uint8_t> terminals;
  std::vector<std::uint64_t> trajectory_ends;

  std::size_t size() const { return rewards.size(); }
  std::size_t trajectory_count() const { return trajectory_ends.size(); }
  std::size_t trajectory_begin(std::size_t t) const { return t == 0 ? 0 : trajectory_ends[t - 1]; }

  Transition transition(std::size_t i) const;
  /// Appends a complete trajectory; throws ConfigError on dimension mismatch.
  void append_trajectory(const std::vector<Transition>& trajectory);
  /// Throws FormatError when the arrays or boundaries are inconsistent.
  void check_consistent() const;

  bool operator==(const TrajectoryDataset&) const = default;
};

/// Reward-free view handed to imitation learners. Columns are transitions.
struct ExpertView {
  Matrix states;
  Matrix actions;
  Matrix next_states;
  Vector terminals;

  Eigen::Index size() const { return states.cols(); }
};

ExpertView expert_view(const TrajectoryDataset& dataset);

/// Rolls out `policy` (mean action when deterministic) for complete episodes.
TrajectoryDataset record_expert(const GaussianPolicy& policy, const EnvSpec& env, int episodes, Rng& rng,
                                bool deterministic = true);

/// Keeps indices 0, rate, 2 rate, ... of every trajectory independently.
TrajectoryDataset subsample(const TrajectoryDataset& dataset, int rate = 20);

/// Marks rewards as not recorded (NaN), e.g. before handing a file to third parties.
TrajectoryDataset strip_rewards(const TrajectoryDataset& dataset);

struct DatasetStats {
  double mean_return = 0.0;
  double std_return = 0.0;  ///< population standard deviation over trajectories
  std::size_t trajectories = 0;
};

/// Statistics of per-trajectory undiscounted true return.
DatasetStats dataset_stats(const TrajectoryDataset& dataset);

}  // namespace ilsuite
