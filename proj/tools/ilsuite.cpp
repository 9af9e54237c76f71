// ilsuite: command-line front end for expert generation, training, evaluation,
// hyperparameter search, profiling and reporting.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "ilsuite/dataset/ilds.hpp"
#include "ilsuite/error.hpp"
#include "ilsuite/harness/config.hpp"
#include "ilsuite/harness/evaluate.hpp"
#include "ilsuite/harness/expert.hpp"
#include "ilsuite/harness/profile.hpp"
#include "ilsuite/harness/report.hpp"
#include "ilsuite/harness/search.hpp"
#include "ilsuite/harness/training.hpp"

namespace fs = std::filesystem;
using namespace ilsuite;

namespace {

// Config assembled from --config, then explicit flags, then --set overrides.
struct ConfigOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;

  void add_to(CLI::App* app, const std::vector<std::string>& keys) {
    app->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "override one key (key=value); repeatable");
    for (const auto& key : keys) {
      std::string flag = "--" + key;
      for (char& c : flag)
        if (c == '_') c = '-';
      app->add_option_function<std::string>(flag, [this, key](const std::string& v) { flags[key] = v; },
                                            "sets '" + key + "'");
    }
  }

  RunConfig build() const {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& [key, value] : flags) config.set(key, value);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      config.set(s.substr(0, eq), s.substr(eq + 1));
    }
    config.validate();
    return config;
  }
};

const std::vector<std::string> kRunFlags = {"algo",          "env",
                                            "dataset",       "subsample",
                                            "steps",         "seed",
                                            "eval_interval", "eval_episodes",
                                            "gmmil_self_similarity", "dril_quantile",
                                            "red_output_dim", "replay_multiplier",
                                            "strict_ranges"};

std::vector<std::uint64_t> parse_seeds(const std::string& text, std::uint64_t fallback) {
  if (text.empty()) return {fallback};
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      seeds.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--seeds: bad seed '" + item + "'");
    }
  }
  return seeds;
}

std::string self_path(const char* argv0) {
  std::error_code ec;
  const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  return ec ? fs::absolute(argv0).string() : exe.string();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

int cmd_generate_expert(const RunConfig& base, int episodes, const std::string& out, const std::string& runs_dir,
                        const std::string& policy_out) {
  const ExpertResult r = generate_expert(base, episodes);
  save_dataset(r.dataset, out);
  const DatasetStats stats = dataset_stats(r.dataset);
  const nlohmann::json meta = {{"env", base.env},
                               {"seed", base.seed},
                               {"steps", r.ppo.env_steps},
                               {"episodes", episodes},
                               {"initial_return", r.initial_return},
                               {"reference_return", r.reference_return},
                               {"checkpoint_step", r.checkpoint_step},
                               {"checkpoint_return", r.checkpoint_return},
                               {"dataset_mean_return", stats.mean_return},
                               {"dataset_std_return", stats.std_return}};
  write_file(out + ".json", meta.dump(2) + "\n");
  if (!runs_dir.empty()) {
    const RunSeries run{"ppo", base.env, base.seed, r.ppo.evaluations};
    write_run_csv(run, fs::path(runs_dir) / run_file_name("ppo", base.env, base.seed));
  }
  if (!policy_out.empty()) save_policy(r.expert, policy_out);
  std::cout << "expert checkpoint at step " << r.checkpoint_step << ": return " << r.checkpoint_return
            << " (initial " << r.initial_return << ", reference " << r.reference_return << ")\n"
            << "dataset " << out << ": " << r.dataset.size() << " transitions, return " << stats.mean_return
            << " ± " << stats.std_return << "\n";
  return 0;
}

int cmd_train(const RunConfig& base, const std::string& seeds_text, const std::string& out_dir,
              const std::string& policy_out) {
  const auto dataset = load_training_dataset(base);
  for (std::uint64_t seed : parse_seeds(seeds_text, base.seed)) {
    RunConfig config = base;
    config.seed = seed;
    const TrainingResult result = run_training(config, dataset ? &*dataset : nullptr);
    const std::string algo = to_string(config.algo);
    const RunSeries run{algo, config.env, seed, result.evaluations};
    const fs::path path = fs::path(out_dir) / run_file_name(algo, config.env, seed);
    write_run_csv(run, path);
    if (!policy_out.empty()) {
      fs::path p(policy_out);
      if (seeds_text.find(',') != std::string::npos) p.replace_filename(p.stem().string() + "_seed" + std::to_string(seed) + p.extension().string());
      save_policy(result.policy, p);
    }
    const EvalPoint& last = result.evaluations.back();
    std::cout << algo << " " << config.env << " seed " << seed << ": final return " << last.mean_return << " ± "
              << last.std_return << " after " << result.env_steps << " steps -> " << path.string() << "\n";
  }
  return 0;
}

int cmd_evaluate(const std::string& policy_path, const std::string& env_name, int episodes, std::uint64_t seed,
                 const std::string& csv_path) {
  const GaussianPolicy policy = load_policy(policy_path);
  const EvalResult r = evaluate(policy, make_env(env_name), episodes, seed);
  if (!csv_path.empty()) {
    std::string csv = "episode,seed,return\n";
    for (std::size_t i = 0; i < r.returns.size(); ++i)
      csv += std::to_string(i) + "," + std::to_string(seed) + "," + format_real(r.returns[i]) + "\n";
    write_file(csv_path, csv);
  }
  std::cout << "return over " << episodes << " episodes: " << r.mean << " ± " << r.std << "\n";
  return 0;
}

int cmd_search(const RunConfig& base, int budget, const std::string& out_dir) {
  const auto dataset = load_training_dataset(base);
  const SearchResult result = hyperparameter_search(base, budget, [&](const RunConfig& config) {
    return run_training(config, dataset ? &*dataset : nullptr).evaluations;
  });
  write_search(result, base, out_dir);
  if (result.best)
    std::cout << "best trial " << *result.best << " objective "
              << *result.trials[static_cast<std::size_t>(*result.best)].objective << "\n";
  else
    std::cout << "no trial produced an objective\n";
  return 0;
}

int cmd_profile(const RunConfig& base, const std::vector<std::string>& algo_names, int repeats, int scaling_batch,
                const std::string& out_dir, const std::string& exe) {
  std::vector<Algorithm> algos;
  for (const auto& name : algo_names) algos.push_back(parse_algorithm(name));
  if (algos.empty())
    for (Algorithm a : all_algorithms())
      if (a != Algorithm::ppo) algos.push_back(a);

  const auto rows = profile_algorithms(base, algos, repeats, exe, fs::path(out_dir) / "cells");
  const std::string tables = format_profile_tables(rows);
  write_file(fs::path(out_dir) / "profile.txt", tables);
  write_file(fs::path(out_dir) / "profile.csv", format_profile_csv(rows));
  std::cout << tables;

  if (scaling_batch > 0) {
    const auto dataset = load_training_dataset(standardized_profile_config(base));
    Matrix expert;
    if (dataset) {
      const ExpertView view = expert_view(*dataset);
      expert.resize(view.states.rows() + view.actions.rows(), view.size());
      expert << view.states, view.actions;
    } else {
      throw ConfigError("profile: the kernel scaling check needs --dataset");
    }
    const ScalingMeasurement m = gmmil_scaling(expert, scaling_batch, 5, base.seed);
    std::ostringstream text;
    text << "gmmil reward computation, expert " << expert.cols() << " points\n"
         << "agent batch " << m.agent_batch << ": " << m.seconds_small << " s\n"
         << "agent batch " << 2 * m.agent_batch << ": " << m.seconds_large << " s\n"
         << "ratio " << std::fixed << std::setprecision(3) << m.ratio() << "\n";
    write_file(fs::path(out_dir) / "scaling.txt", text.str());
    std::cout << "\n" << text.str();
  }
  return 0;
}

int cmd_report(const std::string& runs_dir, const std::vector<std::string>& dataset_paths, const std::string& out_dir) {
  std::map<std::string, DatasetStats> stats;
  for (const auto& path : dataset_paths) {
    const TrajectoryDataset ds = load_dataset(path);
    stats[ds.env_name] = dataset_stats(ds);
  }
  emit_report(read_run_dir(runs_dir), stats, out_dir);
  std::ifstream summary(fs::path(out_dir) / "summary.txt");
  std::cout << summary.rdbuf();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Imitation-learning reward constructions on small continuous-control tasks"};
  app.require_subcommand(1);

  ConfigOptions gen_opts;
  int gen_episodes = 25;
  std::string gen_out;
  std::string gen_runs;
  std::string gen_policy;
  auto* gen = app.add_subcommand("generate-expert", "train PPO on the true reward and record expert episodes");
  gen_opts.add_to(gen, {"env", "steps", "seed", "eval_interval", "eval_episodes", "strict_ranges"});
  gen->add_option("--episodes", gen_episodes, "episodes to record")->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "ILDS1 output path")->required();
  gen->add_option("--runs-dir", gen_runs, "also write the PPO evaluation series here");
  gen->add_option("--policy-out", gen_policy, "also save the expert policy (JSON)");

  ConfigOptions train_opts;
  std::string train_seeds;
  std::string train_out = "runs";
  std::string train_policy;
  auto* train = app.add_subcommand("train", "train one algorithm and write its evaluation series");
  train_opts.add_to(train, kRunFlags);
  train->add_option("--seeds", train_seeds, "comma-separated seeds (overrides --seed)");
  train->add_option("--out-dir", train_out, "directory for <algo>_<env>_seed<k>.csv");
  train->add_option("--policy-out", train_policy, "save the trained policy (JSON)");

  std::string eval_policy;
  std::string eval_env = "pointmass";
  int eval_episodes = 50;
  std::uint64_t eval_seed = 0;
  std::string eval_csv;
  auto* eval = app.add_subcommand("evaluate", "evaluate a saved policy with its mean action");
  eval->add_option("--policy", eval_policy, "policy JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--env", eval_env, "environment");
  eval->add_option("--episodes", eval_episodes, "episodes")->check(CLI::PositiveNumber);
  eval->add_option("--seed", eval_seed, "seed for the start states");
  eval->add_option("--csv", eval_csv, "write per-episode returns");

  ConfigOptions search_opts;
  int search_budget = 20;
  std::string search_out = "search";
  auto* search = app.add_subcommand("search", "space-filling hyperparameter search with a fixed budget");
  search_opts.add_to(search, kRunFlags);
  search->add_option("--budget", search_budget, "number of trials");
  search->add_option("--out-dir", search_out, "directory for trials.csv and best.cfg");

  ConfigOptions profile_opts;
  std::vector<std::string> profile_algos;
  int profile_repeats = 5;
  int profile_scaling = 2048;
  std::string profile_out = "profile";
  auto* profile = app.add_subcommand("profile", "time and peak memory per algorithm under shared settings");
  profile_opts.add_to(profile, {"env", "dataset", "subsample", "steps", "seed", "strict_ranges"});
  profile->add_option("--algos", profile_algos, "algorithms (default: all imitation methods)");
  profile->add_option("--repeats", profile_repeats, "runs per algorithm")->check(CLI::PositiveNumber);
  profile->add_option("--scaling-batch", profile_scaling, "agent batch N for the kernel scaling check (0: skip)");
  profile->add_option("--out-dir", profile_out, "output directory");

  std::string cell_config;
  auto* cell = app.add_subcommand("profile-cell", "");
  cell->group("");
  cell->add_option("--config", cell_config)->required();

  std::string report_runs;
  std::vector<std::string> report_datasets;
  std::string report_out = "report";
  auto* report = app.add_subcommand("report", "aggregate run files into summary tables and a plot spec");
  report->add_option("--runs", report_runs, "directory of <algo>_<env>_seed<k>.csv files")->required();
  report->add_option("--dataset", report_datasets, "expert datasets for the Dataset rows");
  report->add_option("--out-dir", report_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) return cmd_generate_expert(gen_opts.build(), gen_episodes, gen_out, gen_runs, gen_policy);
    if (*train) return cmd_train(train_opts.build(), train_seeds, train_out, train_policy);
    if (*eval) return cmd_evaluate(eval_policy, eval_env, eval_episodes, eval_seed, eval_csv);
    if (*search) return cmd_search(search_opts.build(), search_budget, search_out);
    if (*profile)
      return cmd_profile(profile_opts.build(), profile_algos, profile_repeats, profile_scaling, profile_out,
                         self_path(argv[0]));
    if (*cell) {
      std::cout << format_cell(measure_cell(load_config(cell_config))) << std::endl;
      return 0;
    }
    if (*report) return cmd_report(report_runs, report_datasets, report_out);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
