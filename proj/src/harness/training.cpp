#include "ilsuite/harness/training.hpp"

#include <chrono>
#include <cmath>

#include "ilsuite/dataset/ilds.hpp"
#include "ilsuite/error.hpp"
#include "ilsuite/harness/evaluate.hpp"
#include "ilsuite/ilrewards/bc.hpp"
#include "ilsuite/rlcore/ppo.hpp"
#include "ilsuite/rlcore/reward_scale.hpp"

namespace ilsuite {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

PolicyInit policy_init(const RunConfig& config) {
  PolicyInit init;
  init.hidden = config.hidden();
  init.log_std = config.log_std_init;
  init.final_layer_scale = config.final_layer_scale;
  return init;
}

class Evaluator {
 public:
  Evaluator(const RunConfig& config, const EnvSpec& env, TrainingResult& result, const TrainingHooks& hooks)
      : config_(config), env_(env), result_(result), hooks_(hooks), seed_(evaluation_seed(config.seed)) {}

  void operator()(std::int64_t step, const GaussianPolicy& policy) {
    const EvalResult r = evaluate(policy, env_, config_.eval_episodes, seed_);
    const EvalPoint point{step, r.mean, r.std};
    result_.evaluations.push_back(point);
    if (hooks_.on_evaluation) hooks_.on_evaluation(point, policy);
  }

 private:
  const RunConfig& config_;
  const EnvSpec& env_;
  TrainingResult& result_;
  const TrainingHooks& hooks_;
  std::uint64_t seed_;
};

void check_dataset(const TrajectoryDataset& dataset, const EnvSpec& env) {
  if (dataset.size() == 0) throw ConfigError("training: dataset is empty");
  if (static_cast<int>(dataset.state_dim) != env.state_dim || static_cast<int>(dataset.action_dim) != env.action_dim)
    throw ConfigError("training: dataset dimensions do not match environment '" + env.name + "'");
}

// Offline fit. The step column counts epochs because no environment steps exist.
void train_bc(const RunConfig& config, const TrajectoryDataset& dataset, TrainingResult& result,
              Evaluator& evaluate_at) {
  const ExpertView expert = expert_view(dataset);
  BcConfig bc;
  bc.learning_rate = config.imitation_lr;
  bc.minibatch = config.minibatch;
  bc.max_grad_norm = config.max_grad_norm;
  bc.epochs = 1;
  Rng rng = derive_rng(config.seed, 2);
  for (int epoch = 1; epoch <= config.imitation_epochs; ++epoch) {
    const auto start = Clock::now();
    bc_train(result.policy, expert, bc, rng);
    result.pretrain_seconds += seconds_since(start);
    evaluate_at(epoch, result.policy);
  }
}

void train_online(const RunConfig& config, const EnvSpec& env, const TrajectoryDataset* dataset,
                  TrainingResult& result, Evaluator& evaluate_at, Rng& init_rng) {
  const std::vector<int> hidden = config.hidden();
  MlpParams value_net = make_mlp(env.state_dim, 1, hidden, init_rng, PolicyInit{}.hidden_gain, 1.0);
  OptimizerState optimizer;
  optimizer.learning_rate = config.agent_lr;
  const PpoConfig ppo = config.ppo();

  std::unique_ptr<RewardProvider> provider;
  RewardFn reward_fn;
  if (config.algo != Algorithm::ppo) {
    provider = make_provider(config.algo, expert_view(*dataset), config.provider());
    const auto start = Clock::now();
    provider->pretrain();
    result.pretrain_seconds = seconds_since(start);
    reward_fn = [&](const RewardQuery& query) {
      ++result.reward_calls;
      provider->observe(query, result.policy);
      return provider->rewards(query, result.policy);
    };
  }

  RolloutCollector collector(env, config.seed);
  RolloutBuffer buffer(config.rollout_length);
  Rng shuffle_rng = derive_rng(config.seed, 13);
  RewardScaler scaler;
  scaler.gamma = config.discount;
  const std::int64_t interval = config.effective_eval_interval();
  std::int64_t next_eval = interval;
  while (result.env_steps + config.rollout_length <= config.steps) {
    const auto start = Clock::now();
    collect_rollout(result.policy, value_net, collector, buffer, reward_fn);
    if (config.reward_scaling) scaler.apply(buffer.rewards, buffer.dones);
    prepare_advantages(buffer, ppo);
    ppo_update(result.policy, value_net, optimizer, buffer, ppo, shuffle_rng);
    result.train_seconds += seconds_since(start);
    result.env_steps += config.rollout_length;
    if (result.env_steps >= next_eval) {
      evaluate_at(result.env_steps, result.policy);
      while (next_eval <= result.env_steps) next_eval += interval;
    }
  }
  if (result.evaluations.back().step != result.env_steps) evaluate_at(result.env_steps, result.policy);
}

}  // namespace

std::uint64_t evaluation_seed(std::uint64_t run_seed) { return run_seed ^ 0x5eed0f0e7a1ULL; }

TrainingResult run_training(const RunConfig& config, const TrajectoryDataset* dataset, const TrainingHooks& hooks) {
  config.validate();
  const EnvSpec env = make_env(config.env);
  if (config.algo != Algorithm::ppo) {
    if (dataset == nullptr) throw ConfigError("training: " + to_string(config.algo) + " needs a dataset");
    check_dataset(*dataset, env);
  }

  Rng init_rng = derive_rng(config.seed, 1);
  TrainingResult result{make_policy(env.state_dim, env.action_dim, policy_init(config), init_rng), {}, 0, 0.0, 0.0, 0};
  Evaluator evaluate_at(config, env, result, hooks);
  evaluate_at(0, result.policy);

  if (config.algo == Algorithm::bc) {
    train_bc(config, *dataset, result, evaluate_at);
  } else {
    train_online(config, env, dataset, result, evaluate_at, init_rng);
  }
  return result;
}

std::optional<TrajectoryDataset> load_training_dataset(const RunConfig& config) {
  if (config.dataset.empty()) {
    if (config.algo == Algorithm::ppo) return std::nullopt;
    throw ConfigError("training: " + to_string(config.algo) + " needs a dataset");
  }
  TrajectoryDataset dataset = load_dataset(config.dataset);
  if (!dataset.env_name.empty() && dataset.env_name != config.env)
    throw ConfigError("dataset was recorded on '" + dataset.env_name + "', config asks for '" + config.env + "'");
  return subsample(dataset, config.subsample);
}

}  // namespace ilsuite
