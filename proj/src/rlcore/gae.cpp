#include "ilsuite/rlcore/gae.hpp"

#include <cmath>

#include "ilsuite/error.hpp"

namespace ilsuite {

AdvantageEstimate compute_gae(const Vector& rewards, const Vector& values, const Vector& dones,
                              double bootstrap_value, double gamma, double lambda) {
  const Eigen::Index n = rewards.size();
  if (values.size() != n || dones.size() != n) throw ConfigError("compute_gae: length mismatch");
  AdvantageEstimate est;
  est.advantages = Vector::Zero(n);
  double running = 0.0;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    const double live = 1.0 - dones[t];
    const double next_value = t + 1 < n ? values[t + 1] : bootstrap_value;
    const double delta = rewards[t] + gamma * next_value * live - values[t];
    running = delta + gamma * lambda * live * running;
    est.advantages[t] = running;
  }
  est.returns = est.advantages + values;
  return est;
}

Vector normalize_advantages(const Vector& advantages) {
  if (advantages.size() < 2) throw ConfigError("normalize_advantages: need at least two entries");
  const double mean = advantages.mean();
  const Vector centred = advantages.array() - mean;
  const double std = std::sqrt(centred.squaredNorm() / static_cast<double>(advantages.size()));
  if (std < 1e-12) return Vector::Zero(advantages.size());
  return centred / std;
}

}  // namespace ilsuite
