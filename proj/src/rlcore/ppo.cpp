#include "ilsuite/rlcore/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ilsuite/error.hpp"
#include "ilsuite/rlcore/gae.hpp"

namespace ilsuite {

void PpoConfig::validate() const {
  if (!(clip_ratio > 0.0)) throw ConfigError("ppo: clip ratio must be positive");
  if (iterations < 1) throw ConfigError("ppo: iterations must be positive");
  if (minibatch < 2) throw ConfigError("ppo: minibatch must hold at least two samples");
  if (value_coef < 0.0 || entropy_coef < 0.0) throw ConfigError("ppo: loss coefficients must be non-negative");
  if (gamma < 0.0 || gamma > 1.0 || gae_lambda < 0.0 || gae_lambda > 1.0)
    throw ConfigError("ppo: gamma and lambda must lie in [0, 1]");
  if (!(max_grad_norm > 0.0)) throw ConfigError("ppo: max gradient norm must be positive");
}

double clipped_surrogate(double ratio, double advantage, double clip_ratio) {
  const double clipped = std::clamp(ratio, 1.0 - clip_ratio, 1.0 + clip_ratio);
  return -std::min(ratio * advantage, clipped * advantage);
}

double ppo_objective(const GaussianPolicy& policy, const MlpParams& value_net, const PpoBatch& batch,
                     const PpoConfig& config, PolicyGradients* policy_grads, MlpParams* value_grads,
                     PpoDiagnostics* diagnostics) {
  const Eigen::Index n = batch.states.cols();
  if (n == 0) throw ConfigError("ppo_objective: empty batch");
  const double inv_n = 1.0 / static_cast<double>(n);

  PolicyBatch eval = policy_log_prob_batch(policy, batch.states, batch.actions);
  Vector weights(n);  // d loss / d log pi per sample
  double surrogate = 0.0, kl = 0.0;
  int clipped = 0;
  const double lo = 1.0 - config.clip_ratio, hi = 1.0 + config.clip_ratio;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double log_ratio = eval.log_probs[i] - batch.old_log_probs[i];
    const double ratio = std::exp(log_ratio);
    const double adv = batch.advantages[i];
    const double unclipped_term = ratio * adv;
    const double clipped_term = std::clamp(ratio, lo, hi) * adv;
    surrogate -= std::min(unclipped_term, clipped_term);
    // The unclipped branch carries the gradient whenever it attains the min.
    weights[i] = unclipped_term <= clipped_term ? -ratio * adv * inv_n : 0.0;
    if (ratio < lo || ratio > hi) ++clipped;
    kl += (ratio - 1.0) - log_ratio;
  }
  surrogate *= inv_n;

  MlpTape value_tape = mlp_forward_tape(value_net, batch.states);
  const Eigen::RowVectorXd value_err = value_tape.output.row(0) - batch.returns.transpose();
  const double value_loss = value_err.squaredNorm() * inv_n;
  const double entropy = policy_entropy(policy);
  const double loss = surrogate + config.value_coef * value_loss - config.entropy_coef * entropy;
  if (!std::isfinite(loss)) throw NumericalError("ppo: non-finite loss");

  if (policy_grads) {
    log_prob_backward(policy, eval, batch.actions, weights, *policy_grads);
    policy_grads->log_std.array() -= config.entropy_coef;  // dH / d log_std = 1
  }
  if (value_grads) {
    const Matrix upstream = (2.0 * config.value_coef * inv_n) * value_err;
    mlp_backward(value_net, value_tape, upstream, *value_grads);
  }
  if (diagnostics) {
    diagnostics->policy_loss = surrogate;
    diagnostics->value_loss = value_loss;
    diagnostics->entropy = entropy;
    diagnostics->approx_kl = kl * inv_n;
    diagnostics->clip_fraction = clipped * inv_n;
  }
  return loss;
}

void prepare_advantages(RolloutBuffer& buffer, const PpoConfig& config) {
  const Vector rewards = buffer.rewards + config.gamma * buffer.timeout_values;
  AdvantageEstimate est = compute_gae(rewards, buffer.values, buffer.dones, buffer.bootstrap_value,
                                      config.gamma, config.gae_lambda);
  buffer.returns = std::move(est.returns);
  buffer.advantages = config.normalize_advantages ? normalize_advantages(est.advantages) : est.advantages;
  buffer.has_advantages = true;
}

namespace {

void ppo_step(GaussianPolicy& policy, MlpParams& value_net, OptimizerState& optimizer, const PpoBatch& batch,
              const PpoConfig& config, PpoDiagnostics& diag) {
  PolicyGradients pg = zeros_like(policy);
  MlpParams vg = zeros_like(value_net);
  ppo_objective(policy, value_net, batch, config, &pg, &vg, &diag);

  ParamViews params = param_views(policy);
  append_views(params, param_views(value_net));
  ParamViews grads = param_views(pg);
  append_views(grads, param_views(vg));
  clip_global_norm(grads, config.max_grad_norm);
  optimizer_step(optimizer, params, grads);
}

}  // namespace

PpoDiagnostics ppo_update(GaussianPolicy& policy, MlpParams& value_net, OptimizerState& optimizer,
                          const RolloutBuffer& buffer, const PpoConfig& config, Rng& rng) {
  config.validate();
  if (!buffer.has_advantages) throw ConfigError("ppo_update: advantages not computed");
  const int n = static_cast<int>(buffer.states.cols());
  PpoDiagnostics diag;

  if (config.minibatch >= n) {
    const PpoBatch batch{buffer.states, buffer.actions, buffer.log_probs, buffer.advantages, buffer.returns};
    for (int it = 0; it < config.iterations; ++it) {
      ppo_step(policy, value_net, optimizer, batch, config, diag);
      diag.iterations = it + 1;
    }
    return diag;
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const int m = config.minibatch;
  PpoBatch batch;
  for (int it = 0; it < config.iterations; ++it) {
    // Fisher-Yates with the project RNG so the shuffle is identical across standard libraries.
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    for (int start = 0; start + m <= n; start += m) {
      const std::vector<int> idx(order.begin() + start, order.begin() + start + m);
      batch.states = buffer.states(Eigen::all, idx);
      batch.actions = buffer.actions(Eigen::all, idx);
      batch.old_log_probs = buffer.log_probs(idx);
      batch.advantages = buffer.advantages(idx);
      batch.returns = buffer.returns(idx);
      ppo_step(policy, value_net, optimizer, batch, config, diag);
    }
    diag.iterations = it + 1;
  }
  return diag;
}

}  // namespace ilsuite
