#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ilsuite/approx/policy.hpp"
#include "ilsuite/dataset/dataset.hpp"
#include "ilsuite/rlcore/rollout.hpp"

namespace ilsuite {

enum class Algorithm { bc, gail, airl, fairl, gmmil, red, dril, ppo };

Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm algo);
std::vector<Algorithm> all_algorithms();

/// Properties of each reward construction:
///   matches the expert occupancy, penalises the agent's own occupancy,
///   and whether the learned reward keeps changing during RL.
struct Capabilities {
  bool requires_pretraining = false;
  bool updates_online = false;
  bool penalises_self = false;
  bool uses_dataset = true;
  bool interacts = true;  ///< needs environment interaction during training
};

Capabilities capabilities(Algorithm algo, bool gmmil_self_similarity = true);

enum class DrilStatistic { mean_action_variance, density_variance };

struct ProviderConfig {
  std::vector<int> hidden{256, 256};
  double imitation_lr = 3e-4;
  int pretrain_epochs = 25;      ///< BC, RED and DRIL
  int adversarial_epochs = 5;    ///< GAIL, AIRL and FAIRL
  int replay_multiplier = 3;     ///< rollouts held by the imitation replay
  double r1_coef = 0.5;
  double reward_clamp = 10.0;
  double gamma = 0.99;
  double max_grad_norm = 0.5;
  int minibatch = 64;            ///< pretraining minibatch size
  bool gmmil_self_similarity = true;
  double dril_quantile = 0.98;
  int dril_ensemble = 8;
  double dril_dropout = 0.1;
  DrilStatistic dril_statistic = DrilStatistic::mean_action_variance;
  int red_output_dim = 128;
  std::uint64_t seed = 0;
};

/// Learned reward over agent transitions. Implementations never see the
/// environment reward: expert data arrives as an ExpertView and agent data as a
/// RewardQuery, neither of which carries one.
class RewardProvider {
 public:
  virtual ~RewardProvider() = default;

  virtual Algorithm algorithm() const = 0;
  virtual Capabilities capabilities() const = 0;

  /// Fits whatever is learned from expert data alone. No-op by default.
  virtual void pretrain() {}

  /// Called once per rollout before rewards are requested for it.
  virtual void observe(const RewardQuery& /*batch*/, const GaussianPolicy& /*policy*/) {}

  virtual Vector rewards(const RewardQuery& batch, const GaussianPolicy& policy) = 0;
};

/// Builds the provider for any imitation algorithm except bc and ppo.
std::unique_ptr<RewardProvider> make_provider(Algorithm algo, const ExpertView& expert, const ProviderConfig& config);

}  // namespace ilsuite
