#include "ilsuite/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "ilsuite/envsim/env.hpp"
#include "ilsuite/error.hpp"

namespace ilsuite {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ConfigError("config: bad value '" + text + "' for " + key);
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "on" || text == "true" || text == "1" || text == "yes") return true;
  if (text == "off" || text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("config: bad boolean '" + text + "' for " + key);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

#define ILS_INT(name)                                                                        \
  Field{#name, [](const RunConfig& c) { return std::to_string(c.name); },                    \
        [](RunConfig& c, const std::string& v) { c.name = parse_number<decltype(c.name)>(#name, v); }}
#define ILS_REAL(name)                                                                       \
  Field{#name, [](const RunConfig& c) { return format_double(c.name); },                     \
        [](RunConfig& c, const std::string& v) { c.name = parse_number<double>(#name, v); }}
#define ILS_BOOL(name)                                                                       \
  Field{#name, [](const RunConfig& c) { return std::string(c.name ? "on" : "off"); },       \
        [](RunConfig& c, const std::string& v) { c.name = parse_bool(#name, v); }}
#define ILS_TEXT(name)                                                                       \
  Field{#name, [](const RunConfig& c) { return c.name; }, [](RunConfig& c, const std::string& v) { c.name = v; }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      Field{"algo", [](const RunConfig& c) { return to_string(c.algo); },
            [](RunConfig& c, const std::string& v) { c.algo = parse_algorithm(v); }},
      ILS_TEXT(env),
      ILS_TEXT(dataset),
      ILS_INT(subsample),
      ILS_INT(steps),
      ILS_INT(seed),
      ILS_INT(eval_interval),
      ILS_INT(eval_episodes),
      ILS_BOOL(strict_ranges),
      ILS_INT(hidden_layers),
      ILS_INT(hidden_size),
      ILS_REAL(log_std_init),
      ILS_REAL(final_layer_scale),
      ILS_REAL(discount),
      ILS_REAL(gae_lambda),
      ILS_BOOL(gae_normalize),
      ILS_REAL(agent_lr),
      ILS_INT(rollout_length),
      ILS_REAL(max_grad_norm),
      ILS_REAL(ppo_clip),
      ILS_INT(ppo_iterations),
      ILS_INT(ppo_minibatch),
      ILS_BOOL(reward_scaling),
      ILS_REAL(value_coef),
      ILS_REAL(entropy_coef),
      ILS_INT(imitation_epochs),
      ILS_REAL(imitation_lr),
      ILS_INT(adversarial_epochs),
      ILS_INT(replay_multiplier),
      ILS_REAL(r1_coef),
      ILS_BOOL(gmmil_self_similarity),
      ILS_REAL(dril_quantile),
      ILS_INT(dril_ensemble),
      ILS_REAL(dril_dropout),
      ILS_TEXT(dril_statistic),
      ILS_INT(red_output_dim),
      ILS_REAL(reward_clamp),
      ILS_INT(minibatch),
  };
  return table;
}

#undef ILS_INT
#undef ILS_REAL
#undef ILS_BOOL
#undef ILS_TEXT

template <typename T>
void require_choice(const char* key, T value, std::initializer_list<T> choices) {
  if (std::find(choices.begin(), choices.end(), value) == choices.end())
    throw ConfigError(std::string("config: ") + key + " outside its tuned choice set");
}

void require_range(const char* key, double value, double lo, double hi) {
  // Endpoints come from decimal literals; allow for their rounding.
  const double slack = 1e-12 * std::max(std::abs(lo), std::abs(hi));
  if (!(value >= lo - slack && value <= hi + slack)) throw ConfigError(std::string("config: ") + key + " outside its tuned range");
}

void require_fixed(const char* key, double value, double expected) {
  if (std::abs(value - expected) > 1e-12) throw ConfigError(std::string("config: ") + key + " is fixed in strict mode");
}

}  // namespace

std::int64_t RunConfig::effective_eval_interval() const {
  if (eval_interval > 0) return eval_interval;
  return std::max<std::int64_t>(1, steps / 20);
}

void RunConfig::validate() const {
  make_env(env);
  if (steps <= 0) throw ConfigError("config: steps must be positive");
  if (eval_interval < 0 || eval_episodes < 1) throw ConfigError("config: invalid evaluation schedule");
  if (subsample < 1) throw ConfigError("config: subsample must be at least 1");
  if (hidden_layers < 0 || hidden_size < 1) throw ConfigError("config: invalid network size");
  if (rollout_length < 2 || ppo_iterations < 1 || ppo_minibatch < 2 || minibatch < 1) throw ConfigError("config: invalid batch settings");
  if (!(agent_lr > 0.0) || !(imitation_lr > 0.0)) throw ConfigError("config: learning rates must be positive");
  if (imitation_epochs < 0 || adversarial_epochs < 0) throw ConfigError("config: epochs must be non-negative");
  if (replay_multiplier < 1) throw ConfigError("config: replay_multiplier must be at least 1");
  if (r1_coef < 0.0 || entropy_coef < 0.0 || value_coef < 0.0) throw ConfigError("config: coefficients must be non-negative");
  if (!(dril_quantile > 0.0 && dril_quantile <= 1.0)) throw ConfigError("config: dril_quantile must lie in (0, 1]");
  if (dril_ensemble < 2) throw ConfigError("config: dril_ensemble must be at least 2");
  if (!(dril_dropout >= 0.0 && dril_dropout < 1.0)) throw ConfigError("config: dril_dropout must lie in [0, 1)");
  if (dril_statistic != "mean_action_variance" && dril_statistic != "density_variance")
    throw ConfigError("config: dril_statistic must be mean_action_variance or density_variance");
  if (red_output_dim < 1) throw ConfigError("config: red_output_dim must be positive");
  if (!(reward_clamp > 0.0)) throw ConfigError("config: reward_clamp must be positive");
  if (algo != Algorithm::ppo && dataset.empty()) throw ConfigError("config: " + to_string(algo) + " needs a dataset");
  ppo().validate();

  if (!strict_ranges) return;
  require_fixed("hidden_layers", hidden_layers, 2);
  require_fixed("hidden_size", hidden_size, 256);
  require_fixed("log_std_init", log_std_init, -2.0);
  require_fixed("final_layer_scale", final_layer_scale, 0.01);
  require_fixed("discount", discount, 0.99);
  require_fixed("gae_lambda", gae_lambda, 0.9);
  require_fixed("max_grad_norm", max_grad_norm, 0.5);
  require_fixed("ppo_clip", ppo_clip, 0.25);
  require_fixed("value_coef", value_coef, 0.5);
  require_range("agent_lr", agent_lr, 3e-5, 3e-4);
  require_range("imitation_lr", imitation_lr, 3e-5, 3e-4);
  require_choice("rollout_length", rollout_length, {1024, 2048, 4096});
  require_choice("ppo_iterations", ppo_iterations, {5, 10, 20});
  require_choice("entropy_coef", entropy_coef, {0.0, 1e-3, 1e-2});
  require_choice("imitation_epochs", imitation_epochs, {5, 15, 25});
  require_choice("adversarial_epochs", adversarial_epochs, {5, 15, 25});
  require_choice("replay_multiplier", replay_multiplier, {1, 3, 5});
  require_choice("r1_coef", r1_coef, {0.1, 0.5, 1.0});
}

void RunConfig::set(const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(*this, value);
      return;
    }
  }
  throw ConfigError("config: unknown key '" + key + "'");
}

KeyValues RunConfig::to_key_values() const {
  KeyValues kv;
  for (const auto& f : fields()) kv.emplace_back(f.key, f.get(*this));
  return kv;
}

PpoConfig RunConfig::ppo() const {
  PpoConfig p;
  p.clip_ratio = ppo_clip;
  p.iterations = ppo_iterations;
  p.minibatch = ppo_minibatch;
  p.value_coef = value_coef;
  p.entropy_coef = entropy_coef;
  p.gamma = discount;
  p.gae_lambda = gae_lambda;
  p.normalize_advantages = gae_normalize;
  p.max_grad_norm = max_grad_norm;
  return p;
}

ProviderConfig RunConfig::provider() const {
  ProviderConfig p;
  p.hidden = hidden();
  p.imitation_lr = imitation_lr;
  p.pretrain_epochs = imitation_epochs;
  p.adversarial_epochs = adversarial_epochs;
  p.replay_multiplier = replay_multiplier;
  p.r1_coef = r1_coef;
  p.reward_clamp = reward_clamp;
  p.gamma = discount;
  p.max_grad_norm = max_grad_norm;
  p.minibatch = minibatch;
  p.gmmil_self_similarity = gmmil_self_similarity;
  p.dril_quantile = dril_quantile;
  p.dril_ensemble = dril_ensemble;
  p.dril_dropout = dril_dropout;
  p.dril_statistic =
      dril_statistic == "density_variance" ? DrilStatistic::density_variance : DrilStatistic::mean_action_variance;
  p.red_output_dim = red_output_dim;
  p.seed = seed;
  return p;
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

std::string format_config(const RunConfig& config) {
  std::string out;
  for (const auto& [k, v] : config.to_key_values()) out += k + " = " + v + "\n";
  return out;
}

}  // namespace ilsuite
