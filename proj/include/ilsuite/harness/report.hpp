#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ilsuite/dataset/dataset.hpp"
#include "ilsuite/harness/training.hpp"

namespace ilsuite {

/// Evaluation series of one (algorithm, environment, seed) run.
struct RunSeries {
  std::string algo;
  std::string env;
  std::uint64_t seed = 0;
  std::vector<EvalPoint> evaluations;
};

/// `<algo>_<env>_seed<k>.csv`
std::string run_file_name(const std::string& algo, const std::string& env, std::uint64_t seed);

/// Shortest decimal text that reads back to the same double.
std::string format_real(double value);

/// Columns: step, seed, mean_return, std_return.
std::string format_run_csv(const RunSeries& run);
void write_run_csv(const RunSeries& run, const std::filesystem::path& path);
/// Reads a run file; algorithm, environment and seed come from its name.
RunSeries read_run_csv(const std::filesystem::path& path);
/// Every run file in `dir`, in file-name order.
std::vector<RunSeries> read_run_dir(const std::filesystem::path& dir);

/// Writes runs.csv (all runs concatenated), summary.txt, summary.csv, curves.csv
/// and plot.vl.json (a Vega-Lite spec over curves.csv) into `out_dir`.
/// `datasets` maps environment names to their expert dataset statistics.
void emit_report(const std::vector<RunSeries>& runs, const std::map<std::string, DatasetStats>& datasets,
                 const std::filesystem::path& out_dir);

}  // namespace ilsuite
