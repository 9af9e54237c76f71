#include "ilsuite/ilrewards/bc.hpp"

#include <algorithm>
#include <numeric>

#include "ilsuite/approx/optim.hpp"
#include "ilsuite/error.hpp"

namespace ilsuite {

namespace {

double full_nll(const GaussianPolicy& policy, const ExpertView& expert) {
  return -policy_log_prob_batch(policy, expert.states, expert.actions).log_probs.mean();
}

Matrix gather(const Matrix& m, const std::vector<Eigen::Index>& idx, std::size_t begin, std::size_t end) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(end - begin));
  for (std::size_t i = begin; i < end; ++i) out.col(static_cast<Eigen::Index>(i - begin)) = m.col(idx[i]);
  return out;
}

}  // namespace

BcReport bc_train(GaussianPolicy& policy, const ExpertView& expert, const BcConfig& config, Rng& rng) {
  if (expert.size() == 0) throw ConfigError("bc_train: empty dataset");
  if (config.epochs < 0 || config.minibatch < 1) throw ConfigError("bc_train: invalid epochs or minibatch");

  BcReport report;
  report.initial_nll = full_nll(policy, expert);
  report.final_nll = report.initial_nll;
  OptimizerState optimizer;
  optimizer.learning_rate = config.learning_rate;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(expert.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const bool dropout = policy.mean.dropout_rate > 0.0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(config.minibatch)) {
      const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(config.minibatch));
      const Matrix states = gather(expert.states, order, begin, end);
      const Matrix actions = gather(expert.actions, order, begin, end);
      PolicyGradients grads = zeros_like(policy);
      if (dropout) {
        const DropoutMask mask = draw_dropout_mask(policy.mean, states.cols(), rng);
        nll_and_gradient(policy, states, actions, grads, &mask);
      } else {
        nll_and_gradient(policy, states, actions, grads);
      }
      ParamViews g = param_views(grads);
      clip_global_norm(g, config.max_grad_norm);
      optimizer_step(optimizer, param_views(policy), g);
    }
    report.final_nll = full_nll(policy, expert);
    report.epoch_nll.push_back(report.final_nll);
  }
  return report;
}

}  // namespace ilsuite
