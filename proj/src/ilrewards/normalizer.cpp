#include "ilsuite/ilrewards/normalizer.hpp"

#include <cmath>

#include "ilsuite/error.hpp"

namespace ilsuite {

namespace {

void moments(const Matrix& data, Vector& mean, Vector& scale) {
  mean = data.rowwise().mean();
  const Matrix centred = data.colwise() - mean;
  scale = (centred.array().square().rowwise().sum() / static_cast<double>(data.cols())).sqrt().matrix();
  // Constant features keep their scale.
  for (Eigen::Index i = 0; i < scale.size(); ++i)
    if (scale[i] < 1e-6) scale[i] = 1.0;
}

}  // namespace

FeatureNormalizer FeatureNormalizer::fit(const ExpertView& expert) {
  if (expert.size() == 0) throw ConfigError("normaliser: empty expert data");
  FeatureNormalizer n;
  moments(expert.states, n.state_mean, n.state_scale);
  moments(expert.actions, n.action_mean, n.action_scale);
  return n;
}

FeatureNormalizer FeatureNormalizer::identity(int state_dim, int action_dim) {
  return {Vector::Zero(state_dim), Vector::Ones(state_dim), Vector::Zero(action_dim), Vector::Ones(action_dim)};
}

Matrix FeatureNormalizer::states(const Matrix& raw) const {
  return ((raw.colwise() - state_mean).array().colwise() / state_scale.array()).matrix();
}

Matrix FeatureNormalizer::actions(const Matrix& raw) const {
  return ((raw.colwise() - action_mean).array().colwise() / action_scale.array()).matrix();
}

Matrix FeatureNormalizer::pairs(const Matrix& raw_states, const Matrix& raw_actions) const {
  Matrix out(raw_states.rows() + raw_actions.rows(), raw_states.cols());
  out.topRows(raw_states.rows()) = states(raw_states);
  out.bottomRows(raw_actions.rows()) = actions(raw_actions);
  return out;
}

}  // namespace ilsuite
