#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ilsuite/dataset/dataset.hpp"
#include "ilsuite/harness/config.hpp"
#include "ilsuite/harness/training.hpp"

namespace ilsuite {

/// (r - initial) / (reference - initial): 0 at the baseline return, 1 at the reference.
double normalized_score(double r, double initial, double reference);

struct ExpertResult {
  TrajectoryDataset dataset;   ///< full episodes, not subsampled
  GaussianPolicy expert;       ///< the selected checkpoint
  TrainingResult ppo;          ///< the PPO run the checkpoint came from
  double initial_return = 0.0;    ///< zero-action return on the evaluation resets
  double reference_return = 0.0;  ///< final evaluation of the PPO run
  std::int64_t checkpoint_step = 0;
  double checkpoint_return = 0.0;
};

/// Trains PPO on the true reward, keeps the first evaluated checkpoint whose
/// score between the zero-action return and the final PPO return reaches `threshold`, and records `episodes` deterministic
/// episodes with it. Throws NumericalError when PPO ends below the zero-action return.
ExpertResult generate_expert(RunConfig config, int episodes, double threshold = 0.75);

std::string policy_to_json(const GaussianPolicy& policy);
GaussianPolicy policy_from_json(const std::string& text);
void save_policy(const GaussianPolicy& policy, const std::filesystem::path& path);
GaussianPolicy load_policy(const std::filesystem::path& path);

}  // namespace ilsuite
