#include "ilsuite/envsim/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ilsuite/error.hpp"

namespace ilsuite {

namespace {

double wrap_angle(double theta) {
  double wrapped = std::fmod(theta + std::numbers::pi, 2.0 * std::numbers::pi);
  if (wrapped <= 0.0) wrapped += 2.0 * std::numbers::pi;
  return wrapped - std::numbers::pi;  // (-pi, pi]
}

}  // namespace

EnvSpec make_env(const std::string& name) {
  EnvSpec spec;
  spec.name = name;
  if (name == "pointmass") {
    spec.kind = EnvKind::PointMass2D;
    spec.state_dim = 4;
    spec.action_dim = 2;
    spec.action_low = Vector::Constant(2, -1.0);
    spec.action_high = Vector::Constant(2, 1.0);
    spec.goal = Vector::Zero(2);
  } else if (name == "pendulum") {
    spec.kind = EnvKind::PendulumSwingup;
    spec.state_dim = 3;
    spec.action_dim = 1;
    spec.action_low = Vector::Constant(1, -2.0);
    spec.action_high = Vector::Constant(1, 2.0);
  } else {
    throw ConfigError("unknown environment '" + name + "' (expected pointmass or pendulum)");
  }
  return spec;
}

std::vector<std::string> env_names() { return {"pointmass", "pendulum"}; }

Vector observe(const EnvSpec& spec, const EnvState& state) {
  if (spec.kind == EnvKind::PointMass2D) return state.physical;
  Vector obs(3);
  obs << std::cos(state.physical[0]), std::sin(state.physical[0]), state.physical[1];
  return obs;
}

ResetResult env_reset(const EnvSpec& spec, Rng& rng) {
  ResetResult result;
  if (spec.kind == EnvKind::PointMass2D) {
    std::uniform_real_distribution<double> box(-spec.start_box, spec.start_box);
    result.state.physical = Vector::Zero(4);
    result.state.physical[0] = box(rng);
    result.state.physical[1] = box(rng);
  } else {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> speed(-spec.init_speed, spec.init_speed);
    result.state.physical = Vector::Zero(2);
    // 1 - u lies in (0, 1], so the angle lies in (-pi, pi].
    result.state.physical[0] = std::numbers::pi * (1.0 - 2.0 * unit(rng));
    result.state.physical[1] = speed(rng);
  }
  result.observation = observe(spec, result.state);
  return result;
}

Vector clamp_action(const EnvSpec& spec, const Vector& action) {
  if (action.size() != spec.action_dim) throw ConfigError("env_step: action dimension mismatch");
  return action.cwiseMax(spec.action_low).cwiseMin(spec.action_high);
}

StepResult env_step(const EnvSpec& spec, const EnvState& state, const Vector& action) {
  if (state.done) throw ConfigError("env_step: episode already finished");
  const Vector u = clamp_action(spec, action);
  StepResult result;
  result.state = state;
  Vector& x = result.state.physical;

  if (spec.kind == EnvKind::PointMass2D) {
    const Vector pos = x.head(2);
    result.reward = -(pos - spec.goal).squaredNorm() - spec.action_cost * u.squaredNorm();
    x.segment(2, 2) += spec.dt * u;
    x.head(2) += spec.dt * x.segment(2, 2);
  } else {
    const double theta = x[0];
    const double omega = x[1];
    const double torque = u[0];
    const double angle = wrap_angle(theta);
    result.reward = -(angle * angle + 0.1 * omega * omega + 0.001 * torque * torque);
    const double g = spec.gravity, m = spec.mass, l = spec.length;
    double next_omega = omega + (3.0 * g / (2.0 * l) * std::sin(theta) + 3.0 / (m * l * l) * torque) * spec.dt;
    next_omega = std::clamp(next_omega, -spec.max_speed, spec.max_speed);
    x[0] = theta + next_omega * spec.dt;
    x[1] = next_omega;
  }

  result.state.step = state.step + 1;
  result.state.done = result.state.step >= spec.horizon;
  result.done = result.state.done;
  result.truncated = result.done;  // the horizon is the only way an episode ends
  result.observation = observe(spec, result.state);
  return result;
}

double true_return(const std::vector<double>& rewards, double discount) {
  if (rewards.empty()) throw ConfigError("true_return: empty trajectory");
  double total = 0.0;
  double weight = 1.0;
  for (double r : rewards) {
    total += weight * r;
    weight *= discount;
  }
  return total;
}

}  // namespace ilsuite
