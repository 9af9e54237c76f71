#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ilsuite/harness/config.hpp"
#include "ilsuite/harness/evaluate.hpp"

namespace ilsuite {

/// Applies the shared profiling settings: rollout 2048, 10 PPO iterations,
/// 25 pretraining epochs, 5 adversarial epochs, replay of 3 rollouts.
RunConfig standardized_profile_config(RunConfig base);

/// Peak resident set size of this process in bytes (maximum of the kernel's
/// high-water mark and the sampled value), or empty when unsupported.
std::optional<std::uint64_t> peak_rss_bytes();
std::optional<std::uint64_t> current_rss_bytes();

/// Polls current_rss_bytes() every `interval_ms` on a background thread while alive.
class RssSampler {
 public:
  explicit RssSampler(int interval_ms = 100);
  ~RssSampler();
  RssSampler(const RssSampler&) = delete;
  RssSampler& operator=(const RssSampler&) = delete;

  /// Stops sampling and returns max(sampled peak, OS high-water mark).
  std::optional<std::uint64_t> stop();

 private:
  struct Impl;
  Impl* impl_;
};

struct CellMeasurement {
  double pretrain_seconds = 0.0;
  double train_seconds = 0.0;
  std::optional<std::uint64_t> peak_rss_bytes;
};

/// One training run in the current process with memory sampling.
CellMeasurement measure_cell(const RunConfig& config);

std::string format_cell(const CellMeasurement& m);  ///< single JSON line
CellMeasurement parse_cell(const std::string& line);

struct ProfileRow {
  Algorithm algo = Algorithm::ppo;
  bool has_pretraining = false;
  bool has_training = true;
  SeedSummary pretrain_seconds;
  SeedSummary train_seconds;
  std::optional<SeedSummary> peak_mb;  ///< empty when memory could not be queried
};

/// Runs every (algorithm, repeat) cell in a fresh child process
/// (`executable profile-cell --config <file>`), so peaks are not shared.
std::vector<ProfileRow> profile_algorithms(const RunConfig& base, const std::vector<Algorithm>& algos, int repeats,
                                           const std::filesystem::path& executable,
                                           const std::filesystem::path& work_dir);

/// Time and memory tables in the layout of the usual time/memory appendix tables.
std::string format_profile_tables(const std::vector<ProfileRow>& rows);
/// Machine-readable form; contains timings and therefore is not reproducible.
std::string format_profile_csv(const std::vector<ProfileRow>& rows);

struct ScalingMeasurement {
  int agent_batch = 0;
  double seconds_small = 0.0;  ///< median over repeats, agent batch N
  double seconds_large = 0.0;  ///< median over repeats, agent batch 2N
  double ratio() const { return seconds_large / seconds_small; }
};

/// Times the batched kernel reward over the agent batch at size N and 2N
/// against the same expert set.
ScalingMeasurement gmmil_scaling(const Matrix& expert_points, int agent_batch, int repeats, std::uint64_t seed);

}  // namespace ilsuite
