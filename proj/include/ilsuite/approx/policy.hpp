#pragma once

#include "ilsuite/approx/mlp.hpp"

namespace ilsuite {

/// Diagonal Gaussian policy with an MLP mean and a state-independent log std.
struct GaussianPolicy {
  MlpParams mean;
  Vector log_std;

  int state_dim() const { return mean.input_dim(); }
  int action_dim() const { return mean.output_dim(); }
};

struct PolicyGradients {
  MlpParams mean;
  Vector log_std;
};

struct PolicyInit {
  std::vector<int> hidden{256, 256};
  double log_std = -2.0;
  double hidden_gain = 1.4142135623730951;
  double final_layer_scale = 0.01;
  double dropout_rate = 0.0;
};

GaussianPolicy make_policy(int state_dim, int action_dim, const PolicyInit& init, Rng& rng);

PolicyGradients zeros_like(const GaussianPolicy& policy);
ParamViews param_views(GaussianPolicy& policy);
ParamViews param_views(PolicyGradients& grads);

/// log N(action; mean, diag(exp(log_std))^2).
double gaussian_log_density(const Vector& mean, const Vector& log_std, const Vector& action);

double policy_log_prob(const GaussianPolicy& policy, const Vector& state, const Vector& action);
/// Closed-form differential entropy; independent of the state.
double policy_entropy(const GaussianPolicy& policy);
Vector policy_sample(const GaussianPolicy& policy, const Vector& state, Rng& rng);
Vector policy_mode(const GaussianPolicy& policy, const Vector& state);

/// Batched log-densities with the tape needed for a matching backward pass.
struct PolicyBatch {
  MlpTape tape;
  Vector log_probs;
};

PolicyBatch policy_log_prob_batch(const GaussianPolicy& policy, const Matrix& states, const Matrix& actions,
                                  const DropoutMask* mask = nullptr);

/// Accumulates d/dtheta sum_b weights[b] * log pi(actions_b | states_b).
void log_prob_backward(const GaussianPolicy& policy, const PolicyBatch& batch, const Matrix& actions,
                       const Vector& weights, PolicyGradients& grads, const DropoutMask* mask = nullptr);

/// Mean negative log-likelihood and its gradient (behavioural cloning loss).
double nll_and_gradient(const GaussianPolicy& policy, const Matrix& states, const Matrix& actions,
                        PolicyGradients& grads, const DropoutMask* mask = nullptr);

}  // namespace ilsuite
