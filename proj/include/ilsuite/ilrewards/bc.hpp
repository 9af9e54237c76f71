#pragma once

#include <vector>

#include "ilsuite/approx/policy.hpp"
#include "ilsuite/dataset/dataset.hpp"

namespace ilsuite {

struct BcConfig {
  int epochs = 25;
  double learning_rate = 3e-4;
  int minibatch = 64;
  double max_grad_norm = 0.5;
};

struct BcReport {
  double initial_nll = 0.0;
  double final_nll = 0.0;
  std::vector<double> epoch_nll;  ///< full-dataset NLL after each epoch (dropout off)
};

/// Maximum-likelihood fit of the Gaussian policy to expert actions. Each epoch is
/// one shuffled pass in minibatches; dropout masks are redrawn per minibatch when
/// the mean network has a non-zero dropout rate.
BcReport bc_train(GaussianPolicy& policy, const ExpertView& expert, const BcConfig& config, Rng& rng);

}  // namespace ilsuite
