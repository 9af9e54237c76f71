#include "ilsuite/harness/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <regex>
#include <set>
#include <sstream>

#include "ilsuite/error.hpp"
#include "ilsuite/harness/evaluate.hpp"

namespace ilsuite {

namespace {

const std::regex& run_name_pattern() {
  static const std::regex pattern(R"(([a-z]+)_([a-z0-9]+)_seed([0-9]+)\.csv)");
  return pattern;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("report: cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("report: failed writing '" + path.string() + "'");
}

std::string pm(double mean, double std) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << mean << " ± " << std;
  return out.str();
}

// Canonical order of the rows in the summary: imitation methods, then the baseline.
int algo_rank(const std::string& algo) {
  static const std::vector<std::string> order = {"bc", "gail", "airl", "fairl", "gmmil", "red", "dril", "ppo"};
  const auto it = std::find(order.begin(), order.end(), algo);
  return static_cast<int>(it - order.begin());
}

}  // namespace

std::string run_file_name(const std::string& algo, const std::string& env, std::uint64_t seed) {
  return algo + "_" + env + "_seed" + std::to_string(seed) + ".csv";
}

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string format_run_csv(const RunSeries& run) {
  std::string out = "step,seed,mean_return,std_return\n";
  for (const auto& p : run.evaluations)
    out += std::to_string(p.step) + "," + std::to_string(run.seed) + "," + format_real(p.mean_return) + "," +
           format_real(p.std_return) + "\n";
  return out;
}

void write_run_csv(const RunSeries& run, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_text(path, format_run_csv(run));
}

RunSeries read_run_csv(const std::filesystem::path& path) {
  std::smatch match;
  const std::string name = path.filename().string();
  if (!std::regex_match(name, match, run_name_pattern()))
    throw ConfigError("report: '" + name + "' is not named <algo>_<env>_seed<k>.csv");
  RunSeries run;
  run.algo = match[1];
  run.env = match[2];
  run.seed = std::stoull(match[3]);

  std::ifstream in(path);
  if (!in) throw ConfigError("report: cannot read '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  if (line != "step,seed,mean_return,std_return") throw FormatError("report: unexpected header in " + name);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EvalPoint p;
    unsigned long long seed = 0;
    long long step = 0;
    if (std::sscanf(line.c_str(), "%lld,%llu,%lf,%lf", &step, &seed, &p.mean_return, &p.std_return) != 4)
      throw FormatError("report: malformed row in " + name);
    p.step = step;
    run.evaluations.push_back(p);
  }
  return run;
}

std::vector<RunSeries> read_run_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("report: '" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && std::regex_match(name, run_name_pattern())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunSeries> runs;
  for (const auto& f : files) runs.push_back(read_run_csv(f));
  return runs;
}

void emit_report(const std::vector<RunSeries>& runs, const std::map<std::string, DatasetStats>& datasets,
                 const std::filesystem::path& out_dir) {
  if (runs.empty()) throw ConfigError("report: no completed runs");
  std::filesystem::create_directories(out_dir);

  std::vector<RunSeries> sorted = runs;
  std::sort(sorted.begin(), sorted.end(), [](const RunSeries& a, const RunSeries& b) {
    return std::tuple(a.env, algo_rank(a.algo), a.algo, a.seed) < std::tuple(b.env, algo_rank(b.algo), b.algo, b.seed);
  });

  std::string all = "algo,env,step,seed,mean_return,std_return\n";
  for (const auto& run : sorted)
    for (const auto& p : run.evaluations)
      all += run.algo + "," + run.env + "," + std::to_string(p.step) + "," + std::to_string(run.seed) + "," +
             format_real(p.mean_return) + "," + format_real(p.std_return) + "\n";
  write_text(out_dir / "runs.csv", all);

  // Final evaluation of each seed, grouped by (env, algo).
  std::vector<std::pair<std::string, std::string>> groups;
  std::map<std::pair<std::string, std::string>, std::vector<double>> finals;
  std::map<std::pair<std::string, std::string>, std::map<std::int64_t, std::vector<double>>> curves;
  for (const auto& run : sorted) {
    const auto key = std::make_pair(run.env, run.algo);
    if (!finals.count(key)) groups.push_back(key);
    if (!run.evaluations.empty()) finals[key].push_back(run.evaluations.back().mean_return);
    for (const auto& p : run.evaluations) curves[key][p.step].push_back(p.mean_return);
  }

  std::ostringstream txt;
  std::string csv = "env,algorithm,mean,std,stderr,seeds\n";
  std::set<std::string> envs;
  for (const auto& [env, algo] : groups) envs.insert(env);
  for (const auto& env : envs) {
    txt << "Environment: " << env << "\n";
    txt << std::left << std::setw(10) << "Algorithm" << std::setw(26) << "Return (mean ± std)" << "Seeds\n";
    const auto ds = datasets.find(env);
    if (ds != datasets.end()) {
      txt << std::left << std::setw(10) << "Dataset" << std::setw(26) << pm(ds->second.mean_return, ds->second.std_return)
          << ds->second.trajectories << " trajectories\n";
      csv += env + ",Dataset," + format_real(ds->second.mean_return) + "," + format_real(ds->second.std_return) + ",," +
             std::to_string(ds->second.trajectories) + "\n";
    }
    for (const auto& key : groups) {
      if (key.first != env) continue;
      const SeedSummary s = summarize(finals[key]);
      const std::string label = key.second == "ppo" ? "PPO" : key.second;
      txt << std::left << std::setw(10) << label << std::setw(26) << pm(s.mean, s.std) << s.count << "\n";
      csv += env + "," + label + "," + format_real(s.mean) + "," + format_real(s.std) + "," + format_real(s.stderr_) +
             "," + std::to_string(s.count) + "\n";
    }
    txt << "\n";
  }
  txt << "Final evaluation per seed: 50-episode deterministic mean return; table shows mean ± std across seeds.\n";
  write_text(out_dir / "summary.txt", txt.str());
  write_text(out_dir / "summary.csv", csv);

  std::string curve_csv = "env,algo,step,mean_return,std_return,seeds\n";
  for (const auto& key : groups) {
    for (const auto& [step, values] : curves[key]) {
      const SeedSummary s = summarize(values);
      curve_csv += key.first + "," + key.second + "," + std::to_string(step) + "," + format_real(s.mean) + "," +
                   format_real(s.std) + "," + std::to_string(s.count) + "\n";
    }
  }
  write_text(out_dir / "curves.csv", curve_csv);

  const std::string plot = R"({
  "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
  "description": "Evaluation return against environment steps, mean and std across seeds",
  "data": {"url": "curves.csv", "format": {"type": "csv"}},
  "transform": [
    {"calculate": "datum.mean_return - datum.std_return", "as": "lower"},
    {"calculate": "datum.mean_return + datum.std_return", "as": "upper"}
  ],
  "facet": {"column": {"field": "env", "type": "nominal"}},
  "spec": {
    "layer": [
      {"mark": {"type": "area", "opacity": 0.2},
       "encoding": {"x": {"field": "step", "type": "quantitative"},
                    "y": {"field": "lower", "type": "quantitative"},
                    "y2": {"field": "upper"},
                    "color": {"field": "algo", "type": "nominal"}}},
      {"mark": "line",
       "encoding": {"x": {"field": "step", "type": "quantitative", "title": "environment steps"},
                    "y": {"field": "mean_return", "type": "quantitative", "title": "return"},
                    "color": {"field": "algo", "type": "nominal"}}}
    ]
  },
  "resolve": {"scale": {"y": "independent"}}
}
)";
  write_text(out_dir / "plot.vl.json", plot);
}

}  // namespace ilsuite
