#pragma once

#include <memory>

#include "ilsuite/ilrewards/normalizer.hpp"
#include "ilsuite/ilrewards/provider.hpp"

namespace ilsuite {

/// Sum of two Gaussian kernels, k(x, y) = exp(-|x-y|^2 / sigma1) + exp(-|x-y|^2 / sigma2).
struct KernelConfig {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  bool self_similarity = true;

  void validate() const;
};

/// Median over all unordered pairs of columns of the (squared or plain)
/// Euclidean distance. A zero median falls back to the smallest non-zero
/// distance; throws ConfigError with fewer than two points or when every
/// distance is zero.
double median_heuristic(const Matrix& points, bool squared);

/// sigma1 from expert and initial-policy points (squared distances),
/// sigma2 from expert points alone (plain distances).
KernelConfig gmmil_init(const Matrix& expert_points, const Matrix& initial_policy_points, bool self_similarity = true);

double kernel(const Vector& x, const Vector& y, const KernelConfig& cfg);

/// mean_i k(x, expert_i) - [self_similarity] mean_j k(x, agent_j).
double gmmil_reward(const Vector& x, const Matrix& expert, const Matrix& agent, const KernelConfig& cfg);

/// Batched rewards for every column of `queries`. Materialises the full query x
/// (expert + agent) kernel matrices.
Vector gmmil_rewards(const Matrix& queries, const Matrix& expert, const Matrix& agent, const KernelConfig& cfg);

/// Biased (V-statistic) squared MMD between two point sets under `cfg`'s kernel.
double mmd_squared(const Matrix& p, const Matrix& q, const KernelConfig& cfg);

std::unique_ptr<RewardProvider> make_gmmil_provider(const ExpertView& expert, const ProviderConfig& config);

}  // namespace ilsuite
