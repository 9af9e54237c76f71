#pragma once

#include <deque>
#include <memory>

#include "ilsuite/approx/optim.hpp"
#include "ilsuite/ilrewards/normalizer.hpp"
#include "ilsuite/ilrewards/provider.hpp"

namespace ilsuite {

enum class AdversarialKind { gail, airl, fairl };

/// GAIL/FAIRL: one network mapping [s; a] to a logit.
/// AIRL: reward head g(s, a) and shaping head h(s); the logit is
///   f(s, a, s') - log pi(a|s),  f = g(s, a) + gamma (1 - done) h(s') - h(s),
/// i.e. D = exp(f) / (exp(f) + pi(a|s)).
struct Discriminator {
  AdversarialKind kind = AdversarialKind::gail;
  MlpParams net;
  MlpParams reward_head;
  MlpParams shaping_head;
  double gamma = 0.99;
};

Discriminator make_discriminator(AdversarialKind kind, int state_dim, int action_dim, const std::vector<int>& hidden,
                                 double gamma, Rng& rng);
Discriminator zeros_like(const Discriminator& disc);
ParamViews param_views(Discriminator& disc);

/// Discriminator inputs for one batch, already normalised. `log_pi` is only
/// read for AIRL and is treated as a constant offset (no input gradient).
struct DiscBatch {
  Matrix states;
  Matrix actions;
  Matrix next_states;
  Vector terminals;
  Vector log_pi;

  Eigen::Index size() const { return states.cols(); }
};

/// log D - log(1 - D) per sample.
Vector disc_logits(const Discriminator& disc, const DiscBatch& batch);

/// Gradient of D = sigmoid(logit) w.r.t. the concatenated inputs [s; a] (GAIL/FAIRL)
/// or [s; a; s'] (AIRL), one column per sample.
Matrix disc_input_gradient(const Discriminator& disc, const DiscBatch& batch);

/// R1 term: mean over the batch of ||d D / d input||^2.
double r1_penalty(const Discriminator& disc, const DiscBatch& batch);

struct DiscLoss {
  double cross_entropy = 0.0;  ///< -mean log D(expert) - mean log(1 - D(agent))
  double r1 = 0.0;
  double total = 0.0;
};

/// Loss minimised by the discriminator; gradients added into `grads` when given.
DiscLoss disc_loss(const Discriminator& disc, const DiscBatch& expert, const DiscBatch& agent, double r1_coef,
                   Discriminator* grads = nullptr);

/// Reward functions of the discriminator output.
double gail_log_reward(double d);  ///< log D (original GAIL form; analysis only)
double logit_reward(double d);     ///< log D - log(1 - D)
double fairl_reward(double logit); ///< -h e^h

/// Reward used for training: the logit for GAIL and AIRL, -h e^h for FAIRL,
/// clamped to [-clamp, clamp].
double adversarial_reward(AdversarialKind kind, double logit, double clamp);

/// Ring store of agent batches; pushing beyond capacity evicts the oldest.
class ImitationReplay {
 public:
  explicit ImitationReplay(int capacity);
  void push(RewardQuery batch);
  const std::deque<RewardQuery>& contents() const { return batches_; }
  int capacity() const { return capacity_; }
  bool empty() const { return batches_.empty(); }

 private:
  int capacity_;
  std::deque<RewardQuery> batches_;
};

struct DiscTrainConfig {
  int epochs = 5;
  double r1_coef = 0.5;
  double max_grad_norm = 0.5;
};

/// Builds normalised discriminator inputs; for AIRL the current policy's
/// log-density at the (raw) state-action pairs is recomputed here.
DiscBatch make_disc_batch(const Discriminator& disc, const FeatureNormalizer& norm, const Matrix& states,
                          const Matrix& actions, const Matrix& next_states, const Vector& terminals,
                          const GaussianPolicy* policy);

/// Each epoch takes one optimiser step per replay batch, paired with the full
/// expert batch, so updates scale with the replay size. Returns the last loss.
DiscLoss disc_train(Discriminator& disc, OptimizerState& optimizer, const ExpertView& expert,
                    const ImitationReplay& replay, const FeatureNormalizer& norm, const GaussianPolicy& policy,
                    const DiscTrainConfig& config);

std::unique_ptr<RewardProvider> make_adversarial_provider(AdversarialKind kind, const ExpertView& expert,
                                                          const ProviderConfig& config);

}  // namespace ilsuite
