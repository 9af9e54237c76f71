#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ilsuite/ilrewards/provider.hpp"
#include "ilsuite/rlcore/ppo.hpp"

namespace ilsuite {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Everything that determines a training run. Serialised as flat `key = value`
/// text; every hyperparameter key is always written with its value.
struct RunConfig {
  Algorithm algo = Algorithm::ppo;
  std::string env = "pointmass";
  std::string dataset;
  int subsample = 20;
  std::int64_t steps = 300000;
  std::uint64_t seed = 0;
  std::int64_t eval_interval = 0;  ///< 0: steps / 20
  int eval_episodes = 50;
  bool strict_ranges = true;       ///< reject values outside the tuned grid

  int hidden_layers = 2;
  int hidden_size = 256;
  double log_std_init = -2.0;
  double final_layer_scale = 0.01;

  double discount = 0.99;
  double gae_lambda = 0.9;
  bool gae_normalize = true;

  double agent_lr = 3e-4;
  int rollout_length = 2048;
  double max_grad_norm = 0.5;

  double ppo_clip = 0.25;
  int ppo_iterations = 10;
  int ppo_minibatch = 64;  ///< >= rollout_length: full-batch passes
  bool reward_scaling = true;  ///< divide PPO rewards by the running return std
  double value_coef = 0.5;
  double entropy_coef = 0.0;

  int imitation_epochs = 25;
  double imitation_lr = 3e-4;
  int adversarial_epochs = 5;
  int replay_multiplier = 3;
  double r1_coef = 0.5;

  bool gmmil_self_similarity = true;
  double dril_quantile = 0.98;
  int dril_ensemble = 8;
  double dril_dropout = 0.1;
  std::string dril_statistic = "mean_action_variance";
  int red_output_dim = 128;
  double reward_clamp = 10.0;
  int minibatch = 64;

  std::int64_t effective_eval_interval() const;
  std::vector<int> hidden() const { return std::vector<int>(static_cast<std::size_t>(hidden_layers), hidden_size); }

  /// Throws ConfigError for invalid values; with strict_ranges also for values
  /// outside the tuned choice sets and ranges.
  void validate() const;

  void set(const std::string& key, const std::string& value);
  KeyValues to_key_values() const;

  PpoConfig ppo() const;
  ProviderConfig provider() const;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys are errors.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});
std::string format_config(const RunConfig& config);

}  // namespace ilsuite
