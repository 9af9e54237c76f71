#include "ilsuite/approx/optim.hpp"

#include <cmath>

#include "ilsuite/error.hpp"

namespace ilsuite {

void optimizer_step(OptimizerState& state, const ParamViews& params, const ParamViews& grads) {
  if (params.size() != grads.size()) throw ConfigError("optimizer_step: parameter/gradient count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size() != grads[i].size()) throw ConfigError("optimizer_step: parameter/gradient shape mismatch");
    for (double g : grads[i])
      if (!std::isfinite(g)) throw NumericalError("optimizer_step: non-finite gradient");
  }
  if (state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.push_back(Vector::Zero(static_cast<Eigen::Index>(p.size())));
      state.second_moment.push_back(Vector::Zero(static_cast<Eigen::Index>(p.size())));
    }
  } else if (state.first_moment.size() != params.size()) {
    throw ConfigError("optimizer_step: moment layout does not match parameters");
  }

  ++state.step;
  const double correction1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  const double step_size = state.learning_rate / correction1;
  const double sqrt_c2 = std::sqrt(correction2);

  for (std::size_t i = 0; i < params.size(); ++i) {
    Eigen::Map<Vector> p(params[i].data(), static_cast<Eigen::Index>(params[i].size()));
    Eigen::Map<const Vector> g(grads[i].data(), static_cast<Eigen::Index>(grads[i].size()));
    Vector& m = state.first_moment[i];
    Vector& v = state.second_moment[i];
    if (m.size() != p.size()) throw ConfigError("optimizer_step: moment shape mismatch");
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
    p.array() -= step_size * m.array() / (v.array().sqrt() / sqrt_c2 + state.epsilon);
  }
}

double global_norm(const ParamViews& grads) {
  double sum = 0.0;
  for (const auto& g : grads)
    for (double x : g) sum += x * x;
  return std::sqrt(sum);
}

double clip_global_norm(const ParamViews& grads, double max_norm) {
  if (!(max_norm > 0.0)) throw ConfigError("clip_global_norm: max_norm must be positive");
  const double norm = global_norm(grads);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (const auto& g : grads)
      for (double& x : g) x *= scale;
  }
  return norm;
}

}  // namespace ilsuite
