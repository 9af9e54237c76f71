#pragma once

#include "ilsuite/dataset/dataset.hpp"

namespace ilsuite {

/// Per-dimension affine normalisation fitted to expert states and actions.
struct FeatureNormalizer {
  Vector state_mean;
  Vector state_scale;
  Vector action_mean;
  Vector action_scale;

  static FeatureNormalizer fit(const ExpertView& expert);
  static FeatureNormalizer identity(int state_dim, int action_dim);

  Matrix states(const Matrix& raw) const;
  Matrix actions(const Matrix& raw) const;
  /// Normalised [state; action] columns.
  Matrix pairs(const Matrix& raw_states, const Matrix& raw_actions) const;
};

}  // namespace ilsuite
