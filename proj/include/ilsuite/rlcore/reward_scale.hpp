#pragma once

#include <cstdint>

#include "ilsuite/approx/params.hpp"

namespace ilsuite {

/// Divides rewards by the running standard deviation of the discounted return
/// G_t = r_t + gamma G_{t-1} (reset after each done step). No mean is
/// subtracted, so every reward keeps its sign.
struct RewardScaler {
  double gamma = 0.99;
  double epsilon = 1e-8;
  double running_return = 0.0;
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  /// Folds the batch into the statistics, then rescales it in place.
  /// Leaves rewards unchanged until two returns have been seen.
  void apply(Vector& rewards, const Vector& dones);
  double scale() const;
};

}  // namespace ilsuite
