#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ilsuite/harness/config.hpp"
#include "ilsuite/harness/training.hpp"

namespace ilsuite {

/// One searchable hyperparameter: log-uniform over [low, high] or a choice list.
struct SearchDimension {
  std::string key;
  bool log_uniform = false;
  double low = 0.0;
  double high = 0.0;
  std::vector<std::string> choices;

  std::string value_at(double unit) const;  ///< maps a point of [0, 1) to a value
};

/// Dimensions relevant to `algo`; keys outside the list keep their base values.
std::vector<SearchDimension> search_space(Algorithm algo);

/// `budget` space-filling points of the search space (Sobol sequence, origin skipped).
std::vector<KeyValues> sample_configurations(const std::vector<SearchDimension>& space, int budget);

enum class TrialStatus { complete, incomplete, failed };
std::string to_string(TrialStatus status);

struct TrialRecord {
  int index = 0;
  KeyValues sampled;
  std::vector<double> evaluation_means;
  std::optional<double> objective;  ///< mean of the last 5 evaluation means
  TrialStatus status = TrialStatus::incomplete;
  std::string failure;
  double wall_seconds = 0.0;
};

/// Mean of the last five values; empty with fewer than five.
std::optional<double> search_objective(const std::vector<double>& evaluation_means);

struct SearchResult {
  std::vector<TrialRecord> trials;
  std::optional<int> best;  ///< highest objective, first trial on ties
};

/// Returns the evaluation series for one configuration.
using TrialRunner = std::function<std::vector<EvalPoint>(const RunConfig&)>;

/// Trains each sampled configuration once. Numerical failures mark the trial as
/// failed and the search continues; configuration errors propagate.
SearchResult hyperparameter_search(const RunConfig& base, int budget, const TrialRunner& runner);

/// trials.csv (deterministic), best.cfg, and timings.txt (wall-clock, not deterministic).
void write_search(const SearchResult& result, const RunConfig& base, const std::filesystem::path& out_dir);

}  // namespace ilsuite
