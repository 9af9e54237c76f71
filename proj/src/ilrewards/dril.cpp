#include "ilsuite/ilrewards/dril.hpp"

#include <algorithm>
#include <cmath>

#include "ilsuite/error.hpp"
#include "ilsuite/ilrewards/bc.hpp"

namespace ilsuite {

double quantile_order_statistic(std::vector<double> values, double p) {
  if (values.empty()) throw ConfigError("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("quantile: level must lie in [0, 1]");
  const auto n = static_cast<long>(values.size());
  // Guard against p * n landing a hair above an integer.
  long rank = static_cast<long>(std::ceil(p * static_cast<double>(n) - 1e-9));
  rank = std::clamp(rank, 1L, n);
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return values[static_cast<std::size_t>(rank - 1)];
}

Vector dril_uncertainty(const DropoutEnsemble& ensemble, const Matrix& states, const Matrix& actions,
                        std::uint64_t seed) {
  if (ensemble.ensemble_size < 2) throw ConfigError("dril: ensemble size must be at least 2");
  const Eigen::Index n = states.cols();
  const auto members = static_cast<double>(ensemble.ensemble_size);
  Rng rng = derive_rng(seed, 41);
  const bool dropout = ensemble.policy.mean.dropout_rate > 0.0;
  // Without dropout every member is the same network.
  if (!dropout) return Vector::Zero(n);

  if (ensemble.statistic == DrilStatistic::mean_action_variance) {
    Matrix sum = Matrix::Zero(ensemble.policy.action_dim(), n);
    Matrix sum_sq = Matrix::Zero(ensemble.policy.action_dim(), n);
    for (int e = 0; e < ensemble.ensemble_size; ++e) {
      const DropoutMask mask = draw_dropout_mask(ensemble.policy.mean, n, rng);
      const Matrix mu = mlp_forward(ensemble.policy.mean, states, &mask);
      sum += mu;
      sum_sq += mu.cwiseProduct(mu);
    }
    const Matrix mean = sum / members;
    const Matrix var = (sum_sq / members - mean.cwiseProduct(mean)).cwiseMax(0.0);
    return var.colwise().sum().transpose();
  }

  if (actions.cols() != n) throw ConfigError("dril: density statistic needs one action per state");
  Vector sum = Vector::Zero(n), sum_sq = Vector::Zero(n);
  for (int e = 0; e < ensemble.ensemble_size; ++e) {
    const DropoutMask mask = draw_dropout_mask(ensemble.policy.mean, n, rng);
    const Vector density = policy_log_prob_batch(ensemble.policy, states, actions, &mask).log_probs.array().exp();
    sum += density;
    sum_sq += density.cwiseProduct(density);
  }
  const Vector mean = sum / members;
  return (sum_sq / members - mean.cwiseProduct(mean)).cwiseMax(0.0);
}

void dril_pretrain(DropoutEnsemble& ensemble, const ExpertView& expert, const DrilTrainConfig& config, Rng& rng) {
  if (expert.size() == 0) throw ConfigError("dril_pretrain: empty dataset");
  bc_train(ensemble.policy, expert, BcConfig{config.epochs, config.learning_rate, config.minibatch, config.max_grad_norm},
           rng);
  const Vector u = dril_uncertainty(ensemble, expert.states, expert.actions, config.mask_seed);
  ensemble.threshold = quantile_order_statistic(std::vector<double>(u.data(), u.data() + u.size()), ensemble.quantile);
  ensemble.ready = true;
}

double dril_reward_from_uncertainty(double uncertainty, double threshold) {
  return uncertainty <= threshold ? 1.0 : -1.0;
}

Vector dril_rewards(const DropoutEnsemble& ensemble, const Matrix& states, const Matrix& actions,
                    std::uint64_t seed) {
  if (!ensemble.ready) throw ConfigError("dril: threshold not computed");
  const Vector u = dril_uncertainty(ensemble, states, actions, seed);
  return u.unaryExpr([&](double v) { return dril_reward_from_uncertainty(v, ensemble.threshold); });
}

namespace {

class DrilProvider final : public RewardProvider {
 public:
  DrilProvider(const ExpertView& expert, const ProviderConfig& config)
      : expert_(expert), rng_(derive_rng(config.seed, 51)), seed_(config.seed) {
    PolicyInit init;
    init.hidden = config.hidden;
    init.dropout_rate = config.dril_dropout;
    ensemble_.policy = make_policy(static_cast<int>(expert.states.rows()), static_cast<int>(expert.actions.rows()),
                                   init, rng_);
    ensemble_.ensemble_size = config.dril_ensemble;
    ensemble_.quantile = config.dril_quantile;
    ensemble_.statistic = config.dril_statistic;
    train_ = {config.pretrain_epochs, config.imitation_lr, config.minibatch, config.max_grad_norm, seed_};
  }

  Algorithm algorithm() const override { return Algorithm::dril; }
  Capabilities capabilities() const override { return ilsuite::capabilities(Algorithm::dril); }

  void pretrain() override { dril_pretrain(ensemble_, expert_, train_, rng_); }

  Vector rewards(const RewardQuery& batch, const GaussianPolicy&) override {
    return dril_rewards(ensemble_, batch.states, batch.actions, seed_ + 1000003ull * ++calls_);
  }

 private:
  ExpertView expert_;
  Rng rng_;
  std::uint64_t seed_;
  std::uint64_t calls_ = 0;
  DropoutEnsemble ensemble_;
  DrilTrainConfig train_;
};

}  // namespace

std::unique_ptr<RewardProvider> make_dril_provider(const ExpertView& expert, const ProviderConfig& config) {
  return std::make_unique<DrilProvider>(expert, config);
}

}  // namespace ilsuite
