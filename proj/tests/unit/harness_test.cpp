#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ilsuite/error.hpp"
#include "ilsuite/harness/config.hpp"
#include "ilsuite/harness/evaluate.hpp"
#include "ilsuite/harness/expert.hpp"
#include "ilsuite/harness/profile.hpp"
#include "ilsuite/harness/report.hpp"
#include "ilsuite/harness/search.hpp"
#include "ilsuite/harness/training.hpp"

using namespace ilsuite;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ilsuite_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig tiny_config(Algorithm algo) {
  RunConfig c;
  c.algo = algo;
  c.strict_ranges = false;
  c.hidden_size = 16;
  c.rollout_length = 256;
  c.steps = 1024;
  c.eval_interval = 512;
  c.eval_episodes = 3;
  c.imitation_epochs = 2;
  c.adversarial_epochs = 1;
  c.ppo_iterations = 2;
  c.red_output_dim = 8;
  return c;
}

TrajectoryDataset tiny_dataset() {
  const EnvSpec env = make_env("pointmass");
  Rng rng(3);
  PolicyInit init;
  init.hidden = {8};
  init.final_layer_scale = 1.0;
  const GaussianPolicy p = make_policy(4, 2, init, rng);
  Rng rec(4);
  return subsample(record_expert(p, env, 4, rec), 20);
}

}  // namespace

TEST(Config, RoundTripsEveryKey) {
  RunConfig c;
  c.algo = Algorithm::gail;
  c.agent_lr = 1.23e-4;
  c.gmmil_self_similarity = false;
  c.dataset = "x.ilds";
  const RunConfig back = parse_config(format_config(c));
  EXPECT_EQ(format_config(back), format_config(c));
  EXPECT_EQ(back.agent_lr, 1.23e-4);
  for (const char* key : {"hidden_layers", "hidden_size", "log_std_init", "final_layer_scale", "discount",
                          "gae_lambda", "gae_normalize", "agent_lr", "rollout_length", "max_grad_norm", "ppo_clip",
                          "ppo_iterations", "value_coef", "entropy_coef", "imitation_epochs", "imitation_lr",
                          "adversarial_epochs", "replay_multiplier", "r1_coef"})
    EXPECT_NE(format_config(c).find(std::string(key) + " = "), std::string::npos) << key;
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_config("nonsense = 1"), ConfigError);
  EXPECT_THROW(parse_config("steps = ten"), ConfigError);
  EXPECT_THROW(parse_config("just text"), ConfigError);
  EXPECT_EQ(parse_config("# comment\n\nsteps = 10 # trailing\n").steps, 10);
}

TEST(Config, StrictRangesEnforced) {
  RunConfig c;
  c.rollout_length = 1000;
  EXPECT_THROW(c.validate(), ConfigError);
  c.rollout_length = 1024;
  c.agent_lr = 1e-3;
  EXPECT_THROW(c.validate(), ConfigError);
  c.agent_lr = 3e-4;
  c.validate();
  c.algo = Algorithm::gail;
  EXPECT_THROW(c.validate(), ConfigError);  // needs a dataset
  c.dataset = "d.ilds";
  c.validate();
  c.ppo_clip = 0.2;
  EXPECT_THROW(c.validate(), ConfigError);
  c.strict_ranges = false;
  c.validate();
}

TEST(Config, DefaultEvalInterval) {
  RunConfig c;
  EXPECT_EQ(c.effective_eval_interval(), 15000);
}

TEST(Evaluate, FixedSeedGivesExactCountAndSingleResetStd) {
  const EnvSpec env = make_env("pointmass");
  Rng rng(1);
  const GaussianPolicy p = make_policy(4, 2, PolicyInit{{8}}, rng);
  EXPECT_EQ(evaluate(p, env, 50, 9).returns.size(), 50u);
  const auto one = evaluate(p, env, 1, 9);
  EXPECT_EQ(one.std, 0.0);
  EXPECT_EQ(evaluate(p, env, 7, 9).returns, evaluate(p, env, 7, 9).returns);
}

TEST(Summarize, Stats) {
  const auto s = summarize({1.0, 3.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.std, 1.0);
  EXPECT_DOUBLE_EQ(s.stderr_, 1.0 / std::sqrt(2.0));
}

TEST(Training, PpoRunsWithoutDataset) {
  const auto r = run_training(tiny_config(Algorithm::ppo), nullptr);
  EXPECT_EQ(r.env_steps, 1024);
  ASSERT_EQ(r.evaluations.size(), 3u);
  EXPECT_EQ(r.evaluations[0].step, 0);
  EXPECT_EQ(r.evaluations[2].step, 1024);
}

TEST(Training, BcTakesNoEnvironmentSteps) {
  const auto ds = tiny_dataset();
  RunConfig c = tiny_config(Algorithm::bc);
  c.dataset = "in-memory";
  const auto r = run_training(c, &ds);
  EXPECT_EQ(r.env_steps, 0);
  EXPECT_EQ(r.evaluations.size(), 3u);  // initial + one per epoch
}

TEST(Training, ImitationNeedsDataset) {
  RunConfig c = tiny_config(Algorithm::gail);
  c.dataset = "in-memory";
  EXPECT_THROW(run_training(c, nullptr), ConfigError);
}

TEST(Training, EveryAlgorithmIsDeterministic) {
  const auto ds = tiny_dataset();
  for (Algorithm a : all_algorithms()) {
    RunConfig c = tiny_config(a);
    c.seed = 5;
    if (a != Algorithm::ppo) c.dataset = "in-memory";
    const auto* d = a == Algorithm::ppo ? nullptr : &ds;
    const auto r1 = run_training(c, d);
    const auto r2 = run_training(c, d);
    ASSERT_EQ(r1.evaluations.size(), r2.evaluations.size());
    for (std::size_t i = 0; i < r1.evaluations.size(); ++i)
      EXPECT_EQ(r1.evaluations[i].mean_return, r2.evaluations[i].mean_return) << to_string(a);
  }
}

TEST(Search, SpaceFillingSamplesStayInRanges) {
  for (Algorithm a : all_algorithms()) {
    RunConfig base;
    base.algo = a;
    base.dataset = "d.ilds";
    for (const auto& kv : sample_configurations(search_space(a), 20)) {
      RunConfig c = base;
      for (const auto& [k, v] : kv) c.set(k, v);
      c.validate();
    }
  }
  const auto samples = sample_configurations(search_space(Algorithm::gail), 20);
  EXPECT_EQ(samples.size(), 20u);
  EXPECT_NE(samples[0], samples[1]);
  EXPECT_THROW(sample_configurations(search_space(Algorithm::gail), 0), ConfigError);
}

TEST(Search, ObjectiveNeedsFiveEvaluations) {
  EXPECT_FALSE(search_objective({1, 2, 3, 4}));
  EXPECT_DOUBLE_EQ(*search_objective({100, 1, 2, 3, 4, 5}), 3.0);
}

TEST(Search, BudgetAndTieBreak) {
  RunConfig base;
  const auto constant = [](const RunConfig&) {
    return std::vector<EvalPoint>(6, EvalPoint{0, 1.0, 0.0});
  };
  const auto one = hyperparameter_search(base, 1, constant);
  EXPECT_EQ(one.trials.size(), 1u);
  EXPECT_EQ(one.best, 0);
  const auto all = hyperparameter_search(base, 20, constant);
  EXPECT_EQ(all.trials.size(), 20u);
  EXPECT_EQ(all.best, 0);

  int calls = 0;
  const auto short_runs = [&](const RunConfig&) {
    ++calls;
    return std::vector<EvalPoint>(calls == 2 ? 6 : 3, EvalPoint{0, 1.0, 0.0});
  };
  const auto partial = hyperparameter_search(base, 3, short_runs);
  EXPECT_EQ(partial.trials[0].status, TrialStatus::incomplete);
  EXPECT_EQ(partial.best, 1);

  const auto failing = [](const RunConfig&) -> std::vector<EvalPoint> { throw NumericalError("boom"); };
  const auto failed = hyperparameter_search(base, 2, failing);
  EXPECT_EQ(failed.trials[1].status, TrialStatus::failed);
  EXPECT_FALSE(failed.best);

  const fs::path dir = scratch("search");
  write_search(all, base, dir);
  std::ifstream csv(dir / "trials.csv");
  int lines = 0;
  for (std::string l; std::getline(csv, l);) ++lines;
  EXPECT_EQ(lines, 21);
  EXPECT_TRUE(fs::exists(dir / "best.cfg"));
  load_config(dir / "best.cfg");
}

TEST(Report, RunCsvAndSummary) {
  const fs::path dir = scratch("report");
  std::vector<RunSeries> runs;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RunSeries r{"gail", "pointmass", seed, {}};
    for (int k = 0; k < 8; ++k) r.evaluations.push_back({k * 1000, -100.0 + k + static_cast<double>(seed), 1.5});
    write_run_csv(r, dir / "runs" / run_file_name(r.algo, r.env, r.seed));
    runs.push_back(r);
  }
  runs.push_back({"ppo", "pointmass", 0, {{0, -50.0, 2.0}}});
  write_run_csv(runs.back(), dir / "runs" / run_file_name("ppo", "pointmass", 0));

  const auto back = read_run_dir(dir / "runs");
  ASSERT_EQ(back.size(), 6u);
  EXPECT_EQ(back[0].algo, "gail");
  EXPECT_EQ(back[0].evaluations.size(), 8u);
  EXPECT_EQ(back[0].evaluations[3].mean_return, runs[0].evaluations[3].mean_return);

  std::map<std::string, DatasetStats> stats{{"pointmass", {-20.0, 3.0, 25}}};
  emit_report(back, stats, dir / "out1");
  emit_report(read_run_dir(dir / "runs"), stats, dir / "out2");
  for (const char* f : {"runs.csv", "summary.txt", "summary.csv", "curves.csv", "plot.vl.json"})
    EXPECT_EQ(slurp(dir / "out1" / f), slurp(dir / "out2" / f)) << f;

  std::stringstream rows(slurp(dir / "out1" / "runs.csv"));
  int gail_rows = 0;
  for (std::string l; std::getline(rows, l);) gail_rows += l.rfind("gail,", 0) == 0;
  EXPECT_EQ(gail_rows, 40);
  const std::string summary = slurp(dir / "out1" / "summary.txt");
  EXPECT_NE(summary.find("Dataset"), std::string::npos);
  EXPECT_NE(summary.find("PPO"), std::string::npos);
  EXPECT_THROW(emit_report({}, stats, dir / "out3"), ConfigError);
}

TEST(Expert, PolicyJsonRoundTrip) {
  Rng rng(2);
  GaussianPolicy p = make_policy(3, 1, PolicyInit{{5, 4}}, rng);
  p.log_std[0] = -1.234567890123;
  const GaussianPolicy back = policy_from_json(policy_to_json(p));
  EXPECT_EQ(back.mean.weights, p.mean.weights);
  EXPECT_EQ(back.mean.biases, p.mean.biases);
  EXPECT_EQ(back.log_std, p.log_std);
  EXPECT_THROW(policy_from_json("{}"), FormatError);
}

TEST(Expert, NormalizedScore) {
  EXPECT_DOUBLE_EQ(normalized_score(-100.0, -100.0, -10.0), 0.0);
  EXPECT_DOUBLE_EQ(normalized_score(-10.0, -100.0, -10.0), 1.0);
  EXPECT_DOUBLE_EQ(normalized_score(-32.5, -100.0, -10.0), 0.75);
}

TEST(Profile, CellLineRoundTrip) {
  CellMeasurement m{1.5, 2.25, 123456789u};
  const auto back = parse_cell(format_cell(m));
  EXPECT_EQ(back.pretrain_seconds, 1.5);
  EXPECT_EQ(back.train_seconds, 2.25);
  EXPECT_EQ(back.peak_rss_bytes, m.peak_rss_bytes);
  m.peak_rss_bytes.reset();
  EXPECT_FALSE(parse_cell(format_cell(m)).peak_rss_bytes);
  EXPECT_THROW(parse_cell("garbage"), FormatError);
}

TEST(Profile, StandardizedSettings) {
  const RunConfig c = standardized_profile_config(RunConfig{});
  EXPECT_EQ(c.rollout_length, 2048);
  EXPECT_EQ(c.ppo_iterations, 10);
  EXPECT_EQ(c.imitation_epochs, 25);
  EXPECT_EQ(c.adversarial_epochs, 5);
  EXPECT_EQ(c.replay_multiplier, 3);
}

TEST(Profile, MemoryIsQueryable) {
  RssSampler sampler(10);
  std::vector<double> big(8'000'000, 1.0);
  const auto peak = sampler.stop();
  ASSERT_TRUE(peak);
  EXPECT_GT(*peak, big.size() * sizeof(double));
}
