#include "ilsuite/ilrewards/red.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ilsuite/approx/optim.hpp"
#include "ilsuite/error.hpp"

namespace ilsuite {

namespace {
constexpr double kHiddenGain = 1.4142135623730951;
}

RndPair make_rnd_pair(int input_dim, int output_dim, const std::vector<int>& hidden, Rng& rng) {
  RndPair pair;
  pair.target = make_mlp(input_dim, output_dim, hidden, rng, kHiddenGain, 1.0);
  pair.predictor = make_mlp(input_dim, output_dim, hidden, rng, kHiddenGain, 1.0);
  return pair;
}

Vector rnd_squared_errors(const RndPair& pair, const Matrix& inputs) {
  const Matrix diff = mlp_forward(pair.predictor, inputs) - mlp_forward(pair.target, inputs);
  return diff.colwise().squaredNorm().transpose();
}

double rnd_mse(const RndPair& pair, const Matrix& inputs, MlpParams* grads) {
  if (inputs.cols() == 0) throw ConfigError("rnd_mse: empty batch");
  MlpTape tape = mlp_forward_tape(pair.predictor, inputs);
  const Matrix diff = tape.output - mlp_forward(pair.target, inputs);
  const double count = static_cast<double>(diff.size());
  if (grads) mlp_backward(pair.predictor, tape, (2.0 / count) * diff, *grads);
  return diff.squaredNorm() / count;
}

std::vector<double> red_pretrain(RndPair& pair, const Matrix& expert_inputs, const RedTrainConfig& config, Rng& rng) {
  const Eigen::Index n = expert_inputs.cols();
  if (n == 0) throw ConfigError("red_pretrain: empty dataset");
  if (config.epochs < 0 || config.minibatch < 1) throw ConfigError("red_pretrain: invalid epochs or minibatch");

  std::vector<double> curve{rnd_mse(pair, expert_inputs)};
  OptimizerState optimizer;
  optimizer.learning_rate = config.learning_rate;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(config.minibatch)) {
      const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(config.minibatch));
      Matrix batch(expert_inputs.rows(), static_cast<Eigen::Index>(end - begin));
      for (std::size_t i = begin; i < end; ++i) batch.col(static_cast<Eigen::Index>(i - begin)) = expert_inputs.col(order[i]);
      MlpParams grads = zeros_like(pair.predictor);
      rnd_mse(pair, batch, &grads);
      ParamViews g = param_views(grads);
      clip_global_norm(g, config.max_grad_norm);
      optimizer_step(optimizer, param_views(pair.predictor), g);
    }
    curve.push_back(rnd_mse(pair, expert_inputs));
  }

  const Vector errors = rnd_squared_errors(pair, expert_inputs);
  std::vector<double> sorted(errors.data(), errors.data() + errors.size());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  pair.sigma_fallback = false;
  if (median > 0.0) {
    pair.sigma = 1.0 / median;
  } else {
    const auto positive = std::find_if(sorted.begin(), sorted.end(), [](double e) { return e > 0.0; });
    pair.sigma = positive != sorted.end() ? 1.0 / *positive : 1.0;
    pair.sigma_fallback = true;
  }
  return curve;
}

double red_reward_from_error(double sigma, double squared_error) { return std::exp(-sigma * squared_error); }

Vector red_rewards(const RndPair& pair, const Matrix& inputs) {
  if (!(pair.sigma > 0.0)) throw ConfigError("red_rewards: bandwidth not set");
  const Vector errors = rnd_squared_errors(pair, inputs);
  return errors.unaryExpr([&](double e) { return red_reward_from_error(pair.sigma, e); });
}

namespace {

class RedProvider final : public RewardProvider {
 public:
  RedProvider(const ExpertView& expert, const ProviderConfig& config)
      : norm_(FeatureNormalizer::fit(expert)),
        expert_inputs_(norm_.pairs(expert.states, expert.actions)),
        train_{config.pretrain_epochs, config.imitation_lr, config.minibatch, config.max_grad_norm},
        rng_(derive_rng(config.seed, 31)) {
    pair_ = make_rnd_pair(static_cast<int>(expert_inputs_.rows()), config.red_output_dim, config.hidden, rng_);
  }

  Algorithm algorithm() const override { return Algorithm::red; }
  Capabilities capabilities() const override { return ilsuite::capabilities(Algorithm::red); }

  void pretrain() override { red_pretrain(pair_, expert_inputs_, train_, rng_); }

  Vector rewards(const RewardQuery& batch, const GaussianPolicy&) override {
    return red_rewards(pair_, norm_.pairs(batch.states, batch.actions));
  }

 private:
  FeatureNormalizer norm_;
  Matrix expert_inputs_;
  RedTrainConfig train_;
  Rng rng_;
  RndPair pair_;
};

}  // namespace

std::unique_ptr<RewardProvider> make_red_provider(const ExpertView& expert, const ProviderConfig& config) {
  return std::make_unique<RedProvider>(expert, config);
}

}  // namespace ilsuite
