#include "ilsuite/harness/evaluate.hpp"

#include <cmath>
#include <numeric>

#include "ilsuite/error.hpp"

namespace ilsuite {

namespace {

// All episodes advance in lock step so the policy runs one batched forward pass
// per time step.
template <typename ActionFn>
EvalResult run_episodes(const EnvSpec& env, int episodes, std::uint64_t seed, ActionFn&& act) {
  if (episodes < 1) throw ConfigError("evaluate: episodes must be positive");
  Rng rng = derive_rng(seed, 51);
  std::vector<EnvState> states;
  Matrix observations(env.state_dim, episodes);
  for (int e = 0; e < episodes; ++e) {
    auto reset = env_reset(env, rng);
    states.push_back(std::move(reset.state));
    observations.col(e) = reset.observation;
  }
  EvalResult result;
  result.returns.assign(static_cast<std::size_t>(episodes), 0.0);
  std::vector<bool> done(static_cast<std::size_t>(episodes), false);
  int remaining = episodes;
  while (remaining > 0) {
    const Matrix actions = act(observations);
    for (int e = 0; e < episodes; ++e) {
      if (done[static_cast<std::size_t>(e)]) continue;
      StepResult step = env_step(env, states[static_cast<std::size_t>(e)], actions.col(e));
      result.returns[static_cast<std::size_t>(e)] += step.reward;
      observations.col(e) = step.observation;
      states[static_cast<std::size_t>(e)] = std::move(step.state);
      if (step.done) {
        done[static_cast<std::size_t>(e)] = true;
        --remaining;
      }
    }
  }
  const SeedSummary s = summarize(result.returns);
  result.mean = s.mean;
  result.std = s.std;
  if (!std::isfinite(result.mean)) throw NumericalError("evaluate: non-finite return");
  return result;
}

}  // namespace

EvalResult evaluate(const GaussianPolicy& policy, const EnvSpec& env, int episodes, std::uint64_t seed) {
  if (policy.state_dim() != env.state_dim || policy.action_dim() != env.action_dim)
    throw ConfigError("evaluate: policy does not match environment dimensions");
  return run_episodes(env, episodes, seed, [&](const Matrix& obs) { return mlp_forward(policy.mean, obs); });
}

EvalResult evaluate_zero_action(const EnvSpec& env, int episodes, std::uint64_t seed) {
  return run_episodes(env, episodes, seed,
                      [&](const Matrix& obs) { return Matrix(Matrix::Zero(env.action_dim, obs.cols())); });
}

SeedSummary summarize(const std::vector<double>& values) {
  SeedSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / n);
  s.stderr_ = s.std / std::sqrt(n);
  return s;
}

}  // namespace ilsuite
