#pragma once

#include "ilsuite/approx/optim.hpp"
#include "ilsuite/approx/policy.hpp"
#include "ilsuite/rlcore/rollout.hpp"

namespace ilsuite {

struct PpoConfig {
  double clip_ratio = 0.25;
  int iterations = 10;
  int minibatch = 64;  // >= rollout length means full-batch passes
  double value_coef = 0.5;
  double entropy_coef = 0.0;
  double gamma = 0.99;
  double gae_lambda = 0.9;
  bool normalize_advantages = true;
  double max_grad_norm = 0.5;

  void validate() const;
};

struct PpoBatch {
  Matrix states;
  Matrix actions;
  Vector old_log_probs;
  Vector advantages;
  Vector returns;
};

struct PpoDiagnostics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  int iterations = 0;
};

/// -min(ratio * A, clip(ratio, 1 - eps, 1 + eps) * A) for one sample.
double clipped_surrogate(double ratio, double advantage, double clip_ratio);

/// Full PPO objective averaged over the batch:
///   surrogate + c1 (V - return)^2 - c2 H[pi].
/// Gradients are added into the optional accumulators.
double ppo_objective(const GaussianPolicy& policy, const MlpParams& value_net, const PpoBatch& batch,
                     const PpoConfig& config, PolicyGradients* policy_grads, MlpParams* value_grads,
                     PpoDiagnostics* diagnostics = nullptr);

/// Runs `config.iterations` passes over the rollout, each split into shuffled
/// minibatches of `config.minibatch` samples (a trailing remainder is dropped).
/// Policy and value parameters share one optimiser and one gradient-norm clip.
/// `rng` drives the shuffle and is untouched for full-batch passes.
/// Throws NumericalError on a non-finite loss.
PpoDiagnostics ppo_update(GaussianPolicy& policy, MlpParams& value_net, OptimizerState& optimizer,
                          const RolloutBuffer& buffer, const PpoConfig& config, Rng& rng);

/// Computes advantages/returns in place (normalising advantages when configured).
/// Horizon cuts are bootstrapped by learning from r_t + gamma V(s_T) at those steps.
void prepare_advantages(RolloutBuffer& buffer, const PpoConfig& config);

}  // namespace ilsuite
