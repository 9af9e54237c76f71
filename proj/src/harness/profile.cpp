#include "ilsuite/harness/profile.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "ilsuite/error.hpp"
#include "ilsuite/harness/training.hpp"
#include "ilsuite/ilrewards/gmmil.hpp"

extern char** environ;

namespace ilsuite {

RunConfig standardized_profile_config(RunConfig base) {
  base.rollout_length = 2048;
  base.ppo_iterations = 10;
  base.imitation_epochs = 25;
  base.adversarial_epochs = 5;
  base.replay_multiplier = 3;
  return base;
}

std::optional<std::uint64_t> current_rss_bytes() {
  std::ifstream statm("/proc/self/statm");
  std::uint64_t size = 0;
  std::uint64_t resident = 0;
  if (!(statm >> size >> resident)) return std::nullopt;
  return resident * static_cast<std::uint64_t>(sysconf(_SC_PAGESIZE));
}

std::optional<std::uint64_t> peak_rss_bytes() {
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0 || usage.ru_maxrss <= 0) return current_rss_bytes();
  return static_cast<std::uint64_t>(usage.ru_maxrss) * 1024u;  // kilobytes on Linux
}

struct RssSampler::Impl {
  std::mutex mutex;
  std::condition_variable wake;
  bool stopping = false;
  std::optional<std::uint64_t> peak;
  std::thread thread;

  void record() {
    if (auto rss = current_rss_bytes()) peak = std::max(peak.value_or(0), *rss);
  }
};

RssSampler::RssSampler(int interval_ms) : impl_(new Impl) {
  impl_->record();
  impl_->thread = std::thread([this, interval_ms] {
    std::unique_lock lock(impl_->mutex);
    while (!impl_->wake.wait_for(lock, std::chrono::milliseconds(interval_ms), [this] { return impl_->stopping; }))
      impl_->record();
  });
}

RssSampler::~RssSampler() {
  stop();
  delete impl_;
}

std::optional<std::uint64_t> RssSampler::stop() {
  {
    std::lock_guard lock(impl_->mutex);
    impl_->stopping = true;
  }
  impl_->wake.notify_all();
  if (impl_->thread.joinable()) impl_->thread.join();
  std::lock_guard lock(impl_->mutex);
  impl_->record();
  if (auto os_peak = peak_rss_bytes()) impl_->peak = std::max(impl_->peak.value_or(0), *os_peak);
  return impl_->peak;
}

CellMeasurement measure_cell(const RunConfig& config) {
  RssSampler sampler;
  const auto dataset = load_training_dataset(config);
  const TrainingResult result = run_training(config, dataset ? &*dataset : nullptr);
  CellMeasurement m;
  m.pretrain_seconds = result.pretrain_seconds;
  m.train_seconds = result.train_seconds;
  m.peak_rss_bytes = sampler.stop();
  return m;
}

std::string format_cell(const CellMeasurement& m) {
  std::ostringstream out;
  out << std::setprecision(17) << "{\"pretrain_seconds\": " << m.pretrain_seconds
      << ", \"train_seconds\": " << m.train_seconds << ", \"peak_rss_bytes\": ";
  if (m.peak_rss_bytes)
    out << *m.peak_rss_bytes;
  else
    out << "null";
  out << '}';
  return out.str();
}

CellMeasurement parse_cell(const std::string& line) {
  CellMeasurement m;
  unsigned long long rss = 0;
  char tail[8] = {};
  if (std::sscanf(line.c_str(), " {\"pretrain_seconds\": %lf, \"train_seconds\": %lf, \"peak_rss_bytes\": %llu",
                  &m.pretrain_seconds, &m.train_seconds, &rss) == 3) {
    m.peak_rss_bytes = rss;
  } else if (std::sscanf(line.c_str(), " {\"pretrain_seconds\": %lf, \"train_seconds\": %lf, \"peak_rss_bytes\": %4s",
                         &m.pretrain_seconds, &m.train_seconds, tail) != 3) {
    throw FormatError("profile: cannot parse cell result '" + line + "'");
  }
  return m;
}

namespace {

CellMeasurement run_child(const std::filesystem::path& executable, const std::filesystem::path& config_path,
                          const std::filesystem::path& output_path) {
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, output_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  const std::string exe = executable.string();
  const std::string cfg = config_path.string();
  std::vector<char*> argv = {const_cast<char*>(exe.c_str()), const_cast<char*>("profile-cell"),
                             const_cast<char*>("--config"), const_cast<char*>(cfg.c_str()), nullptr};
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, exe.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw ConfigError("profile: cannot start '" + exe + "'");

  int status = 0;
  if (waitpid(pid, &status, 0) != pid) throw ConfigError("profile: lost child process");
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    const std::string msg = "profile: cell '" + cfg + "' exited with status " +
                            std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1);
    if (WIFEXITED(status) && WEXITSTATUS(status) == 2) throw NumericalError(msg);
    throw ConfigError(msg);
  }
  std::ifstream in(output_path);
  std::string line;
  std::string last;
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  return parse_cell(last);
}

std::string cell(const SeedSummary& s, int precision) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << s.mean << " ± " << s.std;
  return out.str();
}

}  // namespace

std::vector<ProfileRow> profile_algorithms(const RunConfig& base, const std::vector<Algorithm>& algos, int repeats,
                                           const std::filesystem::path& executable,
                                           const std::filesystem::path& work_dir) {
  if (repeats < 1) throw ConfigError("profile: repeats must be at least 1");
  std::filesystem::create_directories(work_dir);
  std::vector<ProfileRow> rows;
  for (Algorithm algo : algos) {
    RunConfig config = standardized_profile_config(base);
    config.algo = algo;
    if (algo == Algorithm::ppo) config.dataset.clear();
    config.eval_interval = config.steps;
    config.eval_episodes = 1;
    config.validate();

    std::vector<double> pretrain;
    std::vector<double> train;
    std::vector<double> peak;
    bool memory = true;
    for (int r = 0; r < repeats; ++r) {
      config.seed = base.seed + static_cast<std::uint64_t>(r);
      const std::string stem = to_string(algo) + "_" + std::to_string(r);
      const auto cfg_path = work_dir / (stem + ".cfg");
      std::ofstream(cfg_path) << format_config(config);
      const CellMeasurement m = run_child(executable, cfg_path, work_dir / (stem + ".out"));
      pretrain.push_back(m.pretrain_seconds);
      train.push_back(m.train_seconds);
      if (m.peak_rss_bytes)
        peak.push_back(static_cast<double>(*m.peak_rss_bytes) / (1024.0 * 1024.0));
      else
        memory = false;
    }
    const Capabilities caps = capabilities(algo);
    ProfileRow row;
    row.algo = algo;
    row.has_pretraining = caps.requires_pretraining;
    row.has_training = caps.interacts;
    row.pretrain_seconds = summarize(pretrain);
    row.train_seconds = summarize(train);
    if (memory) row.peak_mb = summarize(peak);
    rows.push_back(row);
  }
  return rows;
}

std::string format_profile_tables(const std::vector<ProfileRow>& rows) {
  std::ostringstream out;
  out << "Time (s), mean ± std over repeats\n";
  out << std::left << std::setw(10) << "Algorithm" << std::setw(22) << "Pretraining" << "Training\n";
  for (const auto& row : rows) {
    out << std::left << std::setw(10) << to_string(row.algo) << std::setw(22)
        << (row.has_pretraining ? cell(row.pretrain_seconds, 2) : std::string("-"))
        << (row.has_training ? cell(row.train_seconds, 2) : std::string("-")) << '\n';
  }
  out << "\nMax memory (MB), mean ± std over repeats\n";
  out << std::left << std::setw(10) << "Algorithm" << "Peak RSS\n";
  for (const auto& row : rows)
    out << std::left << std::setw(10) << to_string(row.algo)
        << (row.peak_mb ? cell(*row.peak_mb, 1) : std::string("unavailable")) << '\n';
  return out.str();
}

std::string format_profile_csv(const std::vector<ProfileRow>& rows) {
  std::ostringstream out;
  out << std::setprecision(10)
      << "algo,pretrain_mean_s,pretrain_std_s,train_mean_s,train_std_s,peak_mean_mb,peak_std_mb,repeats\n";
  for (const auto& row : rows) {
    out << to_string(row.algo) << ',';
    if (row.has_pretraining)
      out << row.pretrain_seconds.mean << ',' << row.pretrain_seconds.std;
    else
      out << ',';
    out << ',';
    if (row.has_training)
      out << row.train_seconds.mean << ',' << row.train_seconds.std;
    else
      out << ',';
    out << ',';
    if (row.peak_mb)
      out << row.peak_mb->mean << ',' << row.peak_mb->std;
    else
      out << ',';
    out << ',' << row.train_seconds.count << '\n';
  }
  return out.str();
}

ScalingMeasurement gmmil_scaling(const Matrix& expert_points, int agent_batch, int repeats, std::uint64_t seed) {
  if (agent_batch < 2 || repeats < 1) throw ConfigError("gmmil_scaling: invalid sizes");
  Rng rng = derive_rng(seed, 61);
  std::normal_distribution<double> normal;
  const auto dim = expert_points.rows();
  Matrix large(dim, 2 * agent_batch);
  for (Eigen::Index i = 0; i < large.size(); ++i) large.data()[i] = normal(rng);
  const Matrix small = large.leftCols(agent_batch);
  const KernelConfig cfg = gmmil_init(expert_points, small);

  auto time_one = [&](const Matrix& agent) {
    std::vector<double> times;
    double sink = 0.0;
    for (int r = 0; r < repeats; ++r) {
      const auto start = std::chrono::steady_clock::now();
      sink += gmmil_rewards(agent, expert_points, agent, cfg).sum();
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    if (!std::isfinite(sink)) throw NumericalError("gmmil_scaling: non-finite rewards");
    std::nth_element(times.begin(), times.begin() + static_cast<long>(times.size() / 2), times.end());
    return times[times.size() / 2];
  };
  ScalingMeasurement m;
  m.agent_batch = agent_batch;
  m.seconds_small = time_one(small);
  m.seconds_large = time_one(large);
  return m;
}

}  // namespace ilsuite
