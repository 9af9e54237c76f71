#include "ilsuite/approx/policy.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

#include "ilsuite/error.hpp"

namespace ilsuite {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * ln(2 pi)
}

GaussianPolicy make_policy(int state_dim, int action_dim, const PolicyInit& init, Rng& rng) {
  GaussianPolicy policy;
  policy.mean = make_mlp(state_dim, action_dim, init.hidden, rng, init.hidden_gain, init.final_layer_scale,
                         init.dropout_rate);
  policy.log_std = Vector::Constant(action_dim, init.log_std);
  return policy;
}

PolicyGradients zeros_like(const GaussianPolicy& policy) {
  return {zeros_like(policy.mean), Vector::Zero(policy.log_std.size())};
}

ParamViews param_views(GaussianPolicy& policy) {
  ParamViews views = param_views(policy.mean);
  views.push_back(view_of(policy.log_std));
  return views;
}

ParamViews param_views(PolicyGradients& grads) {
  ParamViews views = param_views(grads.mean);
  views.push_back(view_of(grads.log_std));
  return views;
}

double gaussian_log_density(const Vector& mean, const Vector& log_std, const Vector& action) {
  if (mean.size() != action.size() || log_std.size() != action.size())
    throw ConfigError("gaussian_log_density: dimension mismatch");
  double total = 0.0;
  for (Eigen::Index j = 0; j < action.size(); ++j) {
    const double sigma = std::exp(log_std[j]);
    assert(sigma > 0.0);
    const double z = (action[j] - mean[j]) / sigma;
    total += -0.5 * z * z - log_std[j] - kHalfLog2Pi;
  }
  return total;
}

double policy_log_prob(const GaussianPolicy& policy, const Vector& state, const Vector& action) {
  return gaussian_log_density(mlp_forward_one(policy.mean, state), policy.log_std, action);
}

double policy_entropy(const GaussianPolicy& policy) {
  const double per_dim = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  return policy.log_std.sum() + per_dim * static_cast<double>(policy.log_std.size());
}

Vector policy_sample(const GaussianPolicy& policy, const Vector& state, Rng& rng) {
  Vector mu = mlp_forward_one(policy.mean, state);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index j = 0; j < mu.size(); ++j) mu[j] += std::exp(policy.log_std[j]) * normal(rng);
  return mu;
}

Vector policy_mode(const GaussianPolicy& policy, const Vector& state) { return mlp_forward_one(policy.mean, state); }

PolicyBatch policy_log_prob_batch(const GaussianPolicy& policy, const Matrix& states, const Matrix& actions,
                                  const DropoutMask* mask) {
  if (actions.rows() != policy.action_dim() || actions.cols() != states.cols())
    throw ConfigError("policy_log_prob_batch: action shape mismatch");
  PolicyBatch batch;
  batch.tape = mlp_forward_tape(policy.mean, states, mask);
  const Vector inv_sigma = (-policy.log_std).array().exp().matrix();
  const double log_norm = -policy.log_std.sum() - kHalfLog2Pi * static_cast<double>(policy.action_dim());
  Matrix z = (actions - batch.tape.output).array().colwise() * inv_sigma.array();
  batch.log_probs = (-0.5 * z.array().square().colwise().sum()).transpose().matrix();
  batch.log_probs.array() += log_norm;
  return batch;
}

void log_prob_backward(const GaussianPolicy& policy, const PolicyBatch& batch, const Matrix& actions,
                       const Vector& weights, PolicyGradients& grads, const DropoutMask* mask) {
  if (weights.size() != actions.cols()) throw ConfigError("log_prob_backward: weight length mismatch");
  const Vector inv_var = (-2.0 * policy.log_std).array().exp().matrix();
  const Matrix diff = actions - batch.tape.output;
  // d log pi / d mu = (a - mu) / sigma^2 ; d log pi / d log_std = z^2 - 1
  Matrix upstream = diff.array().colwise() * inv_var.array();
  upstream = upstream.array().rowwise() * weights.transpose().array();
  Matrix z2 = diff.array().square().colwise() * inv_var.array();
  grads.log_std += ((z2.array() - 1.0).rowwise() * weights.transpose().array()).rowwise().sum().matrix();
  mlp_backward(policy.mean, batch.tape, upstream, grads.mean, mask, nullptr);
}

double nll_and_gradient(const GaussianPolicy& policy, const Matrix& states, const Matrix& actions,
                        PolicyGradients& grads, const DropoutMask* mask) {
  if (states.cols() == 0) throw ConfigError("nll_and_gradient: empty batch");
  PolicyBatch batch = policy_log_prob_batch(policy, states, actions, mask);
  const double n = static_cast<double>(states.cols());
  log_prob_backward(policy, batch, actions, Vector::Constant(states.cols(), -1.0 / n), grads, mask);
  return -batch.log_probs.mean();
}

}  // namespace ilsuite
