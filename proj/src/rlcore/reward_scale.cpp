#include "ilsuite/rlcore/reward_scale.hpp"

#include <cmath>

#include "ilsuite/error.hpp"

namespace ilsuite {

void RewardScaler::apply(Vector& rewards, const Vector& dones) {
  if (rewards.size() != dones.size()) throw ConfigError("reward scaler: length mismatch");
  for (Eigen::Index t = 0; t < rewards.size(); ++t) {
    running_return = rewards[t] + gamma * running_return;
    ++count;
    const double delta = running_return - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (running_return - mean);
    if (dones[t] > 0.5) running_return = 0.0;
  }
  rewards /= scale();
}

double RewardScaler::scale() const {
  if (count < 2) return 1.0;
  return std::sqrt(m2 / static_cast<double>(count)) + epsilon;
}

}  // namespace ilsuite
