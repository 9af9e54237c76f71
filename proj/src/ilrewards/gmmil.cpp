#include "ilsuite/ilrewards/gmmil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ilsuite/error.hpp"

namespace ilsuite {

void KernelConfig::validate() const {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw ConfigError("kernel bandwidths must be positive");
}

double median_heuristic(const Matrix& points, bool squared) {
  const Eigen::Index n = points.cols();
  if (n < 2) throw ConfigError("median_heuristic: need at least two points");
  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double d2 = (points.col(i) - points.col(j)).squaredNorm();
      distances.push_back(squared ? d2 : std::sqrt(d2));
    }
  }
  const std::size_t m = distances.size();
  const auto mid = distances.begin() + static_cast<std::ptrdiff_t>(m / 2);
  std::nth_element(distances.begin(), mid, distances.end());
  double median = *mid;
  if (m % 2 == 0) median = 0.5 * (median + *std::max_element(distances.begin(), mid));
  if (median > 0.0) return median;

  double smallest = std::numeric_limits<double>::infinity();
  for (double d : distances)
    if (d > 0.0) smallest = std::min(smallest, d);
  if (!std::isfinite(smallest)) throw ConfigError("median_heuristic: degenerate bandwidth (all points identical)");
  return smallest;
}

KernelConfig gmmil_init(const Matrix& expert_points, const Matrix& initial_policy_points, bool self_similarity) {
  if (expert_points.cols() < 2 || initial_policy_points.cols() < 2)
    throw ConfigError("gmmil_init: need at least two expert and two policy points");
  Matrix both(expert_points.rows(), expert_points.cols() + initial_policy_points.cols());
  both << expert_points, initial_policy_points;
  KernelConfig cfg;
  cfg.sigma1 = median_heuristic(both, true);
  cfg.sigma2 = median_heuristic(expert_points, false);
  cfg.self_similarity = self_similarity;
  cfg.validate();
  return cfg;
}

double kernel(const Vector& x, const Vector& y, const KernelConfig& cfg) {
  const double d2 = (x - y).squaredNorm();
  return std::exp(-d2 / cfg.sigma1) + std::exp(-d2 / cfg.sigma2);
}

double gmmil_reward(const Vector& x, const Matrix& expert, const Matrix& agent, const KernelConfig& cfg) {
  cfg.validate();
  double match = 0.0;
  for (Eigen::Index i = 0; i < expert.cols(); ++i) match += kernel(x, expert.col(i), cfg);
  match /= static_cast<double>(expert.cols());
  if (!cfg.self_similarity) return match;
  double self = 0.0;
  for (Eigen::Index j = 0; j < agent.cols(); ++j) self += kernel(x, agent.col(j), cfg);
  return match - self / static_cast<double>(agent.cols());
}

namespace {

// Full kernel matrix between columns of a and b (rows: a, cols: b).
Matrix kernel_matrix(const Matrix& a, const Matrix& b, const KernelConfig& cfg) {
  const Vector an = a.colwise().squaredNorm().transpose();
  const Eigen::RowVectorXd bn = b.colwise().squaredNorm();
  Matrix d2 = -2.0 * (a.transpose() * b);
  d2.colwise() += an;
  d2.rowwise() += bn;
  d2 = d2.cwiseMax(0.0);
  return (-d2 / cfg.sigma1).array().exp().matrix() + (-d2 / cfg.sigma2).array().exp().matrix();
}

}  // namespace

Vector gmmil_rewards(const Matrix& queries, const Matrix& expert, const Matrix& agent, const KernelConfig& cfg) {
  cfg.validate();
  if (expert.cols() == 0 || (cfg.self_similarity && agent.cols() == 0))
    throw ConfigError("gmmil_rewards: empty expert or agent batch");
  Vector r = kernel_matrix(queries, expert, cfg).rowwise().mean();
  if (cfg.self_similarity) r -= kernel_matrix(queries, agent, cfg).rowwise().mean();
  return r;
}

double mmd_squared(const Matrix& p, const Matrix& q, const KernelConfig& cfg) {
  cfg.validate();
  return kernel_matrix(p, p, cfg).mean() + kernel_matrix(q, q, cfg).mean() - 2.0 * kernel_matrix(p, q, cfg).mean();
}

namespace {

class GmmilProvider final : public RewardProvider {
 public:
  GmmilProvider(const ExpertView& expert, const ProviderConfig& config)
      : norm_(FeatureNormalizer::fit(expert)),
        expert_points_(norm_.pairs(expert.states, expert.actions)),
        self_similarity_(config.gmmil_self_similarity) {}

  Algorithm algorithm() const override { return Algorithm::gmmil; }
  Capabilities capabilities() const override { return ilsuite::capabilities(Algorithm::gmmil, self_similarity_); }

  void observe(const RewardQuery& batch, const GaussianPolicy&) override {
    // Bandwidths come from the first (initial-policy) rollout and stay fixed.
    if (!kernel_) kernel_ = gmmil_init(expert_points_, norm_.pairs(batch.states, batch.actions), self_similarity_);
  }

  Vector rewards(const RewardQuery& batch, const GaussianPolicy&) override {
    if (!kernel_) throw ConfigError("gmmil: bandwidths not initialised");
    const Matrix points = norm_.pairs(batch.states, batch.actions);
    return gmmil_rewards(points, expert_points_, points, *kernel_);
  }

  const std::optional<KernelConfig>& kernel_config() const { return kernel_; }

 private:
  FeatureNormalizer norm_;
  Matrix expert_points_;
  bool self_similarity_;
  std::optional<KernelConfig> kernel_;
};

}  // namespace

std::unique_ptr<RewardProvider> make_gmmil_provider(const ExpertView& expert, const ProviderConfig& config) {
  return std::make_unique<GmmilProvider>(expert, config);
}

}  // namespace ilsuite
