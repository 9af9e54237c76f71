#include "ilsuite/harness/expert.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <vector>

#include "ilsuite/error.hpp"
#include "ilsuite/harness/evaluate.hpp"

namespace ilsuite {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Matrix matrix_from_json(const json& rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.at(0).size());
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = rows.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != c) throw FormatError("policy: ragged weight matrix");
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  return m;
}

Vector vector_from_json(const json& values) {
  const auto v = values.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

double normalized_score(double r, double initial, double reference) {
  return (r - initial) / (reference - initial);
}

ExpertResult generate_expert(RunConfig config, int episodes, double threshold) {
  if (episodes < 1) throw ConfigError("generate-expert: episodes must be positive");
  config.algo = Algorithm::ppo;
  config.dataset.clear();

  std::vector<std::pair<EvalPoint, GaussianPolicy>> checkpoints;
  TrainingHooks hooks;
  hooks.on_evaluation = [&](const EvalPoint& p, const GaussianPolicy& policy) { checkpoints.emplace_back(p, policy); };

  ExpertResult result;
  result.ppo = run_training(config, nullptr, hooks);
  result.initial_return =
      evaluate_zero_action(make_env(config.env), config.eval_episodes, evaluation_seed(config.seed)).mean;
  result.reference_return = checkpoints.back().first.mean_return;
  if (!(result.reference_return > result.initial_return))
    throw NumericalError("generate-expert: PPO did not beat the zero-action policy");

  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const auto& [point, policy] = checkpoints[i];
    if (normalized_score(point.mean_return, result.initial_return, result.reference_return) >= threshold) {
      result.expert = policy;
      result.checkpoint_step = point.step;
      result.checkpoint_return = point.mean_return;
      break;
    }
  }
  Rng rng = derive_rng(config.seed, 71);
  result.dataset = record_expert(result.expert, make_env(config.env), episodes, rng);
  return result;
}

std::string policy_to_json(const GaussianPolicy& policy) {
  json layers = json::array();
  for (std::size_t k = 0; k < policy.mean.layer_count(); ++k)
    layers.push_back({{"weight", matrix_to_json(policy.mean.weights[k])}, {"bias", vector_to_json(policy.mean.biases[k])}});
  const json doc = {{"format", "ilsuite-policy-1"},
                    {"dropout_rate", policy.mean.dropout_rate},
                    {"log_std", vector_to_json(policy.log_std)},
                    {"layers", std::move(layers)}};
  return doc.dump() + "\n";
}

GaussianPolicy policy_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "ilsuite-policy-1") throw FormatError("policy: unknown format");
    GaussianPolicy policy;
    policy.mean.dropout_rate = doc.at("dropout_rate").get<double>();
    policy.log_std = vector_from_json(doc.at("log_std"));
    for (const json& layer : doc.at("layers")) {
      policy.mean.weights.push_back(matrix_from_json(layer.at("weight")));
      policy.mean.biases.push_back(vector_from_json(layer.at("bias")));
    }
    if (policy.mean.weights.empty()) throw FormatError("policy: no layers");
    validate(policy.mean);
    if (policy.log_std.size() != policy.action_dim()) throw FormatError("policy: log_std size mismatch");
    return policy;
  } catch (const json::exception& e) {
    throw FormatError(std::string("policy: ") + e.what());
  }
}

void save_policy(const GaussianPolicy& policy, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write policy '" + path.string() + "'");
  out << policy_to_json(policy);
}

GaussianPolicy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("policy '" + path.string() + "' not found");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return policy_from_json(buffer.str());
}

}  // namespace ilsuite
