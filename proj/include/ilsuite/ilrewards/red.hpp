#pragma once

#include <memory>
#include <vector>

#include "ilsuite/ilrewards/normalizer.hpp"
#include "ilsuite/ilrewards/provider.hpp"

namespace ilsuite {

/// Frozen random target network and a predictor trained to imitate it on expert data.
struct RndPair {
  MlpParams target;
  MlpParams predictor;
  double sigma = 0.0;
  bool sigma_fallback = false;  ///< set when every expert error was zero
};

RndPair make_rnd_pair(int input_dim, int output_dim, const std::vector<int>& hidden, Rng& rng);

/// ||predictor(x) - target(x)||^2 for every column.
Vector rnd_squared_errors(const RndPair& pair, const Matrix& inputs);

/// Mean over samples and output units of the squared error, with its gradient
/// w.r.t. the predictor added into `grads` when given.
double rnd_mse(const RndPair& pair, const Matrix& inputs, MlpParams* grads = nullptr);

struct RedTrainConfig {
  int epochs = 25;
  double learning_rate = 3e-4;
  int minibatch = 64;
  double max_grad_norm = 0.5;
};

/// Fits the predictor, then sets sigma = 1 / median squared error over the
/// expert inputs so the median expert point scores exp(-1). If that median is
/// zero the smallest non-zero error is used; if all are zero sigma = 1.
/// Returns the full-data MSE before training and after each epoch.
std::vector<double> red_pretrain(RndPair& pair, const Matrix& expert_inputs, const RedTrainConfig& config, Rng& rng);

/// exp(-sigma ||f(x) - f_target(x)||^2) per column.
Vector red_rewards(const RndPair& pair, const Matrix& inputs);
double red_reward_from_error(double sigma, double squared_error);

std::unique_ptr<RewardProvider> make_red_provider(const ExpertView& expert, const ProviderConfig& config);

}  // namespace ilsuite
