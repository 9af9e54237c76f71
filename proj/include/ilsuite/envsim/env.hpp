#pragma once

#include <string>
#include <vector>

#include "ilsuite/approx/params.hpp"

namespace ilsuite {

enum class EnvKind { PointMass2D, PendulumSwingup };

/// Static description of a continuous-control task.
struct EnvSpec {
  std::string name;
  EnvKind kind = EnvKind::PointMass2D;
  int state_dim = 0;
  int action_dim = 0;
  Vector action_low;
  Vector action_high;
  int horizon = 200;
  double discount = 0.99;
  double dt = 0.05;

  // PointMass2D
  Vector goal;
  double start_box = 1.0;  ///< initial position uniform in [-start_box, start_box]^2
  double action_cost = 0.01;

  // PendulumSwingup
  double gravity = 10.0;
  double mass = 1.0;
  double length = 1.0;
  double max_speed = 8.0;
  double init_speed = 1.0;  ///< initial angular velocity uniform in [-init_speed, init_speed]
};

/// Internal physical state. PointMass2D: (x, y, vx, vy). PendulumSwingup: (theta, theta_dot)
/// with theta = 0 upright.
struct EnvState {
  Vector physical;
  int step = 0;
  bool done = false;
};

struct ResetResult {
  EnvState state;
  Vector observation;
};

struct StepResult {
  EnvState state;
  Vector observation;
  double reward = 0.0;
  bool done = false;
  bool truncated = false;  ///< ended by the horizon rather than by the task
};

/// Accepts "pointmass" and "pendulum"; throws ConfigError otherwise.
EnvSpec make_env(const std::string& name);
std::vector<std::string> env_names();

ResetResult env_reset(const EnvSpec& spec, Rng& rng);
Vector observe(const EnvSpec& spec, const EnvState& state);
Vector clamp_action(const EnvSpec& spec, const Vector& action);

/// Deterministic transition. The action is clamped to the bounds first; the
/// reward is evaluated at the pre-step state and the clamped action.
/// Throws ConfigError when called on a finished episode.
StepResult env_step(const EnvSpec& spec, const EnvState& state, const Vector& action);

/// Sum of rewards, discounted from the first entry when discount < 1.
double true_return(const std::vector<double>& rewards, double discount = 1.0);

}  // namespace ilsuite
