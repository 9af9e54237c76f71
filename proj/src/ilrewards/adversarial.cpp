#include "ilsuite/ilrewards/adversarial.hpp"

#include <algorithm>
#include <cmath>

#include "ilsuite/error.hpp"

namespace ilsuite {

namespace {

constexpr double kHiddenGain = 1.4142135623730951;

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }
double sigmoid(double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

Matrix stack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

// gamma (1 - done) per sample: weight of h(s') in f.
Eigen::RowVectorXd live_discount(const Discriminator& disc, const DiscBatch& batch) {
  return (disc.gamma * (1.0 - batch.terminals.array())).matrix().transpose();
}

// Gradient of the logit w.r.t. the stacked inputs, one column per sample.
Matrix logit_input_gradient(const Discriminator& disc, const DiscBatch& batch) {
  const Matrix sa = stack(batch.states, batch.actions);
  if (disc.kind != AdversarialKind::airl) return mlp_input_gradient(disc.net, sa);
  const Eigen::Index s = batch.states.rows();
  const Eigen::Index a = batch.actions.rows();
  const Matrix g_sa = mlp_input_gradient(disc.reward_head, sa);
  const Matrix h_s = mlp_input_gradient(disc.shaping_head, batch.states);
  const Matrix h_next = mlp_input_gradient(disc.shaping_head, batch.next_states);
  Matrix out(2 * s + a, batch.size());
  out.topRows(s) = g_sa.topRows(s) - h_s;
  out.middleRows(s, a) = g_sa.bottomRows(a);
  out.bottomRows(s) = h_next.array().rowwise() * live_discount(disc, batch).array();
  return out;
}

// Adds d/dparams sum(upstream .* logits) into grads.
void backprop_logits(const Discriminator& disc, const DiscBatch& batch, const Eigen::RowVectorXd& upstream,
                     Discriminator& grads) {
  const Matrix sa = stack(batch.states, batch.actions);
  if (disc.kind != AdversarialKind::airl) {
    mlp_backward(disc.net, mlp_forward_tape(disc.net, sa), upstream, grads.net);
    return;
  }
  const Eigen::RowVectorXd live = live_discount(disc, batch);
  mlp_backward(disc.reward_head, mlp_forward_tape(disc.reward_head, sa), upstream, grads.reward_head);
  mlp_backward(disc.shaping_head, mlp_forward_tape(disc.shaping_head, batch.next_states),
               upstream.cwiseProduct(live), grads.shaping_head);
  mlp_backward(disc.shaping_head, mlp_forward_tape(disc.shaping_head, batch.states), -upstream,
               grads.shaping_head);
}

// Adds the parameter gradient of coef * mean ||dD/dx||^2 into grads.
double backprop_r1(const Discriminator& disc, const DiscBatch& batch, const Vector& logits, double coef,
                   Discriminator* grads) {
  const Eigen::Index n = batch.size();
  const Matrix grad_y = logit_input_gradient(disc, batch);
  Eigen::RowVectorXd c(n), c_prime_over_c(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = sigmoid(logits[i]);
    c[i] = p * (1.0 - p);
    c_prime_over_c[i] = 1.0 - 2.0 * p;
  }
  const Eigen::RowVectorXd norms = grad_y.colwise().squaredNorm();
  const double penalty = (c.array().square() * norms.array()).sum() / static_cast<double>(n);
  if (grads == nullptr || coef == 0.0) return penalty;

  const double scale = 2.0 * coef / static_cast<double>(n);
  const Eigen::RowVectorXd c2 = c.array().square();
  const Matrix g_bar = (grad_y.array().rowwise() * (scale * c2).array()).matrix();
  const Eigen::RowVectorXd y_bar = scale * (c2.array() * c_prime_over_c.array() * norms.array()).matrix();

  const Matrix sa = stack(batch.states, batch.actions);
  if (disc.kind != AdversarialKind::airl) {
    mlp_input_gradient_backward(disc.net, sa, g_bar, y_bar, grads->net);
    return penalty;
  }
  const Eigen::Index s = batch.states.rows();
  const Eigen::Index a = batch.actions.rows();
  const Eigen::RowVectorXd live = live_discount(disc, batch);
  mlp_input_gradient_backward(disc.reward_head, sa, g_bar.topRows(s + a), y_bar, grads->reward_head);
  mlp_input_gradient_backward(disc.shaping_head, batch.states, -g_bar.topRows(s), -y_bar, grads->shaping_head);
  const Matrix next_bar = (g_bar.bottomRows(s).array().rowwise() * live.array()).matrix();
  mlp_input_gradient_backward(disc.shaping_head, batch.next_states, next_bar, y_bar.cwiseProduct(live),
                              grads->shaping_head);
  return penalty;
}

}  // namespace

Discriminator make_discriminator(AdversarialKind kind, int state_dim, int action_dim, const std::vector<int>& hidden,
                                 double gamma, Rng& rng) {
  Discriminator disc;
  disc.kind = kind;
  disc.gamma = gamma;
  if (kind == AdversarialKind::airl) {
    disc.reward_head = make_mlp(state_dim + action_dim, 1, hidden, rng, kHiddenGain, 1.0);
    disc.shaping_head = make_mlp(state_dim, 1, hidden, rng, kHiddenGain, 1.0);
  } else {
    disc.net = make_mlp(state_dim + action_dim, 1, hidden, rng, kHiddenGain, 1.0);
  }
  return disc;
}

Discriminator zeros_like(const Discriminator& disc) {
  Discriminator z;
  z.kind = disc.kind;
  z.gamma = disc.gamma;
  if (disc.kind == AdversarialKind::airl) {
    z.reward_head = zeros_like(disc.reward_head);
    z.shaping_head = zeros_like(disc.shaping_head);
  } else {
    z.net = zeros_like(disc.net);
  }
  return z;
}

ParamViews param_views(Discriminator& disc) {
  if (disc.kind != AdversarialKind::airl) return param_views(disc.net);
  ParamViews views = param_views(disc.reward_head);
  append_views(views, param_views(disc.shaping_head));
  return views;
}

Vector disc_logits(const Discriminator& disc, const DiscBatch& batch) {
  const Matrix sa = stack(batch.states, batch.actions);
  if (disc.kind != AdversarialKind::airl) return mlp_forward(disc.net, sa).row(0).transpose();
  if (batch.log_pi.size() != batch.size()) throw ConfigError("AIRL discriminator needs policy log-densities");
  const Eigen::RowVectorXd f = mlp_forward(disc.reward_head, sa).row(0) +
                               mlp_forward(disc.shaping_head, batch.next_states).row(0).cwiseProduct(
                                   live_discount(disc, batch)) -
                               mlp_forward(disc.shaping_head, batch.states).row(0);
  return f.transpose() - batch.log_pi;
}

Matrix disc_input_gradient(const Discriminator& disc, const DiscBatch& batch) {
  const Vector logits = disc_logits(disc, batch);
  Matrix grad = logit_input_gradient(disc, batch);
  for (Eigen::Index i = 0; i < grad.cols(); ++i) {
    const double p = sigmoid(logits[i]);
    grad.col(i) *= p * (1.0 - p);
  }
  return grad;
}

double r1_penalty(const Discriminator& disc, const DiscBatch& batch) {
  return backprop_r1(disc, batch, disc_logits(disc, batch), 0.0, nullptr);
}

DiscLoss disc_loss(const Discriminator& disc, const DiscBatch& expert, const DiscBatch& agent, double r1_coef,
                   Discriminator* grads) {
  if (expert.size() == 0) throw ConfigError("disc_loss: empty expert batch");
  if (agent.size() == 0) throw ConfigError("disc_loss: empty agent batch");
  const Vector ye = disc_logits(disc, expert);
  const Vector ya = disc_logits(disc, agent);
  const double ne = static_cast<double>(expert.size());
  const double na = static_cast<double>(agent.size());

  DiscLoss loss;
  Eigen::RowVectorXd up_e(expert.size()), up_a(agent.size());
  for (Eigen::Index i = 0; i < ye.size(); ++i) {
    loss.cross_entropy += softplus(-ye[i]) / ne;
    up_e[i] = -sigmoid(-ye[i]) / ne;
  }
  for (Eigen::Index i = 0; i < ya.size(); ++i) {
    loss.cross_entropy += softplus(ya[i]) / na;
    up_a[i] = sigmoid(ya[i]) / na;
  }
  loss.r1 = backprop_r1(disc, expert, ye, r1_coef, grads);
  loss.total = loss.cross_entropy + r1_coef * loss.r1;
  if (!std::isfinite(loss.total)) throw NumericalError("discriminator: non-finite loss");
  if (grads) {
    backprop_logits(disc, expert, up_e, *grads);
    backprop_logits(disc, agent, up_a, *grads);
  }
  return loss;
}

double gail_log_reward(double d) { return std::log(d); }
double logit_reward(double d) { return std::log(d) - std::log1p(-d); }
double fairl_reward(double logit) { return -logit * std::exp(logit); }

double adversarial_reward(AdversarialKind kind, double logit, double clamp) {
  double r = kind == AdversarialKind::fairl ? fairl_reward(std::min(logit, 700.0)) : logit;
  if (std::isnan(r)) r = 0.0;
  return std::clamp(r, -clamp, clamp);
}

ImitationReplay::ImitationReplay(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw ConfigError("imitation replay size must be at least 1");
}

void ImitationReplay::push(RewardQuery batch) {
  batches_.push_back(std::move(batch));
  while (static_cast<int>(batches_.size()) > capacity_) batches_.pop_front();
}

DiscBatch make_disc_batch(const Discriminator& disc, const FeatureNormalizer& norm, const Matrix& states,
                          const Matrix& actions, const Matrix& next_states, const Vector& terminals,
                          const GaussianPolicy* policy) {
  DiscBatch b{norm.states(states), norm.actions(actions), norm.states(next_states), terminals, Vector()};
  if (disc.kind == AdversarialKind::airl) {
    if (!policy) throw ConfigError("AIRL discriminator batch needs the current policy");
    b.log_pi = policy_log_prob_batch(*policy, states, actions).log_probs;
  }
  return b;
}

DiscLoss disc_train(Discriminator& disc, OptimizerState& optimizer, const ExpertView& expert,
                    const ImitationReplay& replay, const FeatureNormalizer& norm, const GaussianPolicy& policy,
                    const DiscTrainConfig& config) {
  if (replay.empty()) throw ConfigError("disc_train: imitation replay is empty");
  if (expert.size() == 0) throw ConfigError("disc_train: empty expert batch");
  const DiscBatch expert_batch =
      make_disc_batch(disc, norm, expert.states, expert.actions, expert.next_states, expert.terminals, &policy);
  std::vector<DiscBatch> agent_batches;
  for (const auto& q : replay.contents())
    agent_batches.push_back(make_disc_batch(disc, norm, q.states, q.actions, q.next_states, q.terminals, &policy));

  DiscLoss last;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& agent : agent_batches) {
      Discriminator grads = zeros_like(disc);
      last = disc_loss(disc, expert_batch, agent, config.r1_coef, &grads);
      ParamViews g = param_views(grads);
      clip_global_norm(g, config.max_grad_norm);
      optimizer_step(optimizer, param_views(disc), g);
    }
  }
  return last;
}

namespace {

class AdversarialProvider final : public RewardProvider {
 public:
  AdversarialProvider(AdversarialKind kind, const ExpertView& expert, const ProviderConfig& config)
      : kind_(kind),
        expert_(expert),
        norm_(FeatureNormalizer::fit(expert)),
        replay_(config.replay_multiplier),
        train_{config.adversarial_epochs, config.r1_coef, config.max_grad_norm},
        clamp_(config.reward_clamp) {
    Rng rng = derive_rng(config.seed, 21);
    disc_ = make_discriminator(kind, static_cast<int>(expert.states.rows()), static_cast<int>(expert.actions.rows()),
                               config.hidden, config.gamma, rng);
    optimizer_.learning_rate = config.imitation_lr;
  }

  Algorithm algorithm() const override {
    switch (kind_) {
      case AdversarialKind::gail: return Algorithm::gail;
      case AdversarialKind::airl: return Algorithm::airl;
      case AdversarialKind::fairl: break;
    }
    return Algorithm::fairl;
  }

  Capabilities capabilities() const override { return ilsuite::capabilities(algorithm()); }

  void observe(const RewardQuery& batch, const GaussianPolicy& policy) override {
    replay_.push(batch);
    disc_train(disc_, optimizer_, expert_, replay_, norm_, policy, train_);
  }

  Vector rewards(const RewardQuery& batch, const GaussianPolicy& policy) override {
    const DiscBatch b =
        make_disc_batch(disc_, norm_, batch.states, batch.actions, batch.next_states, batch.terminals, &policy);
    const Vector logits = disc_logits(disc_, b);
    Vector r(logits.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = adversarial_reward(kind_, logits[i], clamp_);
    return r;
  }

 private:
  AdversarialKind kind_;
  ExpertView expert_;
  FeatureNormalizer norm_;
  ImitationReplay replay_;
  DiscTrainConfig train_;
  double clamp_;
  Discriminator disc_;
  OptimizerState optimizer_;
};

}  // namespace

std::unique_ptr<RewardProvider> make_adversarial_provider(AdversarialKind kind, const ExpertView& expert,
                                                          const ProviderConfig& config) {
  return std::make_unique<AdversarialProvider>(kind, expert, config);
}

}  // namespace ilsuite
