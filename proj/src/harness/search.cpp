#include "ilsuite/harness/search.hpp"

#include <boost/random/sobol.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ilsuite/error.hpp"

namespace ilsuite {

namespace {

SearchDimension log_range(std::string key, double low, double high) {
  return {std::move(key), true, low, high, {}};
}

SearchDimension choice(std::string key, std::vector<std::string> choices) {
  return {std::move(key), false, 0.0, 0.0, std::move(choices)};
}

std::string format_real(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

std::string csv_real(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

}  // namespace

std::string SearchDimension::value_at(double unit) const {
  if (log_uniform) return format_real(std::exp(std::log(low) + unit * (std::log(high) - std::log(low))));
  const auto k = static_cast<std::size_t>(unit * static_cast<double>(choices.size()));
  return choices[std::min(k, choices.size() - 1)];
}

std::vector<SearchDimension> search_space(Algorithm algo) {
  const SearchDimension imitation_lr = log_range("imitation_lr", 3e-5, 3e-4);
  const SearchDimension pretrain = choice("imitation_epochs", {"5", "15", "25"});
  if (algo == Algorithm::bc) return {imitation_lr, pretrain};

  std::vector<SearchDimension> space = {
      log_range("agent_lr", 3e-5, 3e-4),
      choice("rollout_length", {"1024", "2048", "4096"}),
      choice("ppo_iterations", {"5", "10", "20"}),
      choice("entropy_coef", {"0", "0.001", "0.01"}),
  };
  switch (algo) {
    case Algorithm::red:
    case Algorithm::dril:
      space.push_back(imitation_lr);
      space.push_back(pretrain);
      break;
    case Algorithm::gail:
    case Algorithm::airl:
    case Algorithm::fairl:
      space.push_back(imitation_lr);
      space.push_back(choice("adversarial_epochs", {"5", "15", "25"}));
      space.push_back(choice("replay_multiplier", {"1", "3", "5"}));
      space.push_back(choice("r1_coef", {"0.1", "0.5", "1"}));
      break;
    case Algorithm::gmmil:
      space.push_back(choice("gmmil_self_similarity", {"on", "off"}));
      break;
    default:
      break;
  }
  return space;
}

std::vector<KeyValues> sample_configurations(const std::vector<SearchDimension>& space, int budget) {
  if (budget < 1) throw ConfigError("search: budget must be at least 1");
  std::vector<KeyValues> out;
  if (space.empty()) {
    out.assign(static_cast<std::size_t>(budget), KeyValues{});
    return out;
  }
  boost::random::sobol engine(space.size());
  engine.discard(space.size());  // the first point is the origin
  const double scale = std::ldexp(1.0, -static_cast<int>(std::numeric_limits<boost::random::sobol::result_type>::digits));
  for (int t = 0; t < budget; ++t) {
    KeyValues kv;
    for (const auto& dim : space) kv.emplace_back(dim.key, dim.value_at(static_cast<double>(engine()) * scale));
    out.push_back(std::move(kv));
  }
  return out;
}

std::string to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::complete: return "complete";
    case TrialStatus::incomplete: return "incomplete";
    case TrialStatus::failed: return "failed";
  }
  return "unknown";
}

std::optional<double> search_objective(const std::vector<double>& evaluation_means) {
  constexpr std::size_t window = 5;
  if (evaluation_means.size() < window) return std::nullopt;
  double sum = 0.0;
  for (std::size_t i = evaluation_means.size() - window; i < evaluation_means.size(); ++i) sum += evaluation_means[i];
  return sum / static_cast<double>(window);
}

SearchResult hyperparameter_search(const RunConfig& base, int budget, const TrialRunner& runner) {
  const auto samples = sample_configurations(search_space(base.algo), budget);
  SearchResult result;
  for (std::size_t t = 0; t < samples.size(); ++t) {
    TrialRecord trial;
    trial.index = static_cast<int>(t);
    trial.sampled = samples[t];
    RunConfig config = base;
    for (const auto& [key, value] : samples[t]) config.set(key, value);
    config.validate();

    const auto start = std::chrono::steady_clock::now();
    try {
      for (const auto& point : runner(config)) trial.evaluation_means.push_back(point.mean_return);
      trial.objective = search_objective(trial.evaluation_means);
      trial.status = trial.objective ? TrialStatus::complete : TrialStatus::incomplete;
    } catch (const NumericalError& e) {
      trial.status = TrialStatus::failed;
      trial.failure = e.what();
    }
    trial.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (trial.objective && (!result.best || *trial.objective > *result.trials[*result.best].objective))
      result.best = trial.index;
    result.trials.push_back(std::move(trial));
  }
  return result;
}

void write_search(const SearchResult& result, const RunConfig& base, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto space = search_space(base.algo);

  std::ofstream csv(out_dir / "trials.csv");
  if (!csv) throw ConfigError("search: cannot write to '" + out_dir.string() + "'");
  csv << "trial,status,objective,evaluations";
  for (const auto& dim : space) csv << ',' << dim.key;
  csv << '\n';
  for (const auto& trial : result.trials) {
    csv << trial.index << ',' << to_string(trial.status) << ','
        << (trial.objective ? csv_real(*trial.objective) : std::string()) << ',' << trial.evaluation_means.size();
    for (const auto& [key, value] : trial.sampled) csv << ',' << value;
    csv << '\n';
  }

  std::ofstream timings(out_dir / "timings.txt");
  for (const auto& trial : result.trials) timings << "trial " << trial.index << ' ' << trial.wall_seconds << " s\n";

  if (result.best) {
    RunConfig best = base;
    for (const auto& [key, value] : result.trials[static_cast<std::size_t>(*result.best)].sampled) best.set(key, value);
    std::ofstream cfg(out_dir / "best.cfg");
    cfg << "# best of " << result.trials.size() << " trials: trial " << *result.best << ", objective "
        << csv_real(*result.trials[static_cast<std::size_t>(*result.best)].objective) << '\n'
        << format_config(best);
  }
}

}  // namespace ilsuite
