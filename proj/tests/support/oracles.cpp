#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace oracle {

std::vector<double> numeric_gradient(const ilsuite::ParamViews& params, const std::function<double()>& loss,
                                     double step) {
  std::vector<double> grad;
  for (const auto& view : params) {
    for (double& entry : view) {
      const double saved = entry;
      entry = saved + step;
      const double up = loss();
      entry = saved - step;
      const double down = loss();
      entry = saved;
      grad.push_back((up - down) / (2.0 * step));
    }
  }
  return grad;
}

std::vector<double> flatten(const ilsuite::ParamViews& views) {
  std::vector<double> out;
  for (const auto& v : views) out.insert(out.end(), v.begin(), v.end());
  return out;
}

double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::sqrt(std::max(na, nb));
  return scale == 0.0 ? 0.0 : std::sqrt(diff) / scale;
}

std::vector<double> brute_force_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                                    const std::vector<double>& dones, double bootstrap, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  std::vector<double> delta(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double next = t + 1 < n ? values[t + 1] : bootstrap;
    delta[t] = rewards[t] + gamma * next * (1.0 - dones[t]) - values[t];
  }
  std::vector<double> adv(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t k = t; k < n; ++k) {
      adv[t] += std::pow(gamma * lambda, static_cast<double>(k - t)) * delta[k];
      if (dones[k] > 0.5) break;
    }
  }
  return adv;
}

double naive_kernel(const Vector& x, const Vector& y, double s1, double s2) {
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
  return std::exp(-d2 / s1) + std::exp(-d2 / s2);
}

double naive_mmd_squared(const Matrix& p, const Matrix& q, double s1, double s2) {
  auto mean_k = [&](const Matrix& a, const Matrix& b) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < a.cols(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) sum += naive_kernel(a.col(i), b.col(j), s1, s2);
    return sum / static_cast<double>(a.cols() * b.cols());
  };
  return mean_k(p, p) + mean_k(q, q) - 2.0 * mean_k(p, q);
}

double naive_median_distance(const Matrix& points, bool squared) {
  std::vector<double> d;
  for (Eigen::Index i = 0; i < points.cols(); ++i)
    for (Eigen::Index j = i + 1; j < points.cols(); ++j) {
      const double d2 = (points.col(i) - points.col(j)).squaredNorm();
      d.push_back(squared ? d2 : std::sqrt(d2));
    }
  std::sort(d.begin(), d.end());
  const std::size_t n = d.size();
  return n % 2 == 1 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
}

ilsuite::TrajectoryDataset random_dataset(ilsuite::Rng& rng, bool allow_empty) {
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<int> count(allow_empty ? 0 : 1, 4);
  std::uniform_int_distribution<int> length(1, 40);
  std::normal_distribution<float> value(0.0f, 3.0f);
  std::bernoulli_distribution flag(0.5);

  ilsuite::TrajectoryDataset ds;
  ds.env_name = flag(rng) ? "pointmass" : "pendulum";
  ds.state_dim = static_cast<std::uint32_t>(dim(rng));
  ds.action_dim = static_cast<std::uint32_t>(dim(rng));
  ds.subsample_rate = flag(rng) ? 1u : 20u;
  const int trajectories = count(rng);
  for (int t = 0; t < trajectories; ++t) {
    std::vector<ilsuite::Transition> traj(static_cast<std::size_t>(length(rng)));
    for (std::size_t i = 0; i < traj.size(); ++i) {
      auto& tr = traj[i];
      for (std::uint32_t k = 0; k < ds.state_dim; ++k) {
        tr.state.push_back(value(rng));
        tr.next_state.push_back(value(rng));
      }
      for (std::uint32_t k = 0; k < ds.action_dim; ++k) tr.action.push_back(value(rng));
      tr.reward = value(rng);
      tr.terminal = i + 1 == traj.size() && flag(rng);
    }
    ds.append_trajectory(traj);
  }
  return ds;
}

PointMassLqr::PointMassLqr(const ilsuite::EnvSpec& env) {
  const double dt = env.dt;
  // Per axis: v' = v + dt u, p' = p + dt v'. Stage cost p^2 + c u^2 at the pre-step state.
  Eigen::Matrix2d a;
  a << 1.0, dt, 0.0, 1.0;
  Eigen::Vector2d b(dt * dt, dt);
  Eigen::Matrix2d q = Eigen::Matrix2d::Zero();
  q(0, 0) = 1.0;
  const double r = env.action_cost;

  gains_.resize(static_cast<std::size_t>(env.horizon));
  Eigen::Matrix2d p = Eigen::Matrix2d::Zero();
  for (int t = env.horizon - 1; t >= 0; --t) {
    const double s = r + b.dot(p * b);
    const Eigen::RowVector2d k = (b.transpose() * p * a) / s;
    gains_[static_cast<std::size_t>(t)] = k;
    p = q + a.transpose() * p * a - (a.transpose() * p * b) * k;
  }
}

Vector PointMassLqr::action(const Vector& observation, int step) const {
  const auto& k = gains_[static_cast<std::size_t>(step)];
  Vector u(2);
  for (int axis = 0; axis < 2; ++axis) u[axis] = -(k[0] * observation[axis] + k[1] * observation[2 + axis]);
  return u;
}

double lqr_reference_return(const ilsuite::EnvSpec& env, int episodes, std::uint64_t seed) {
  const PointMassLqr lqr(env);
  ilsuite::Rng rng = ilsuite::derive_rng(seed, 51);
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    auto [state, obs] = ilsuite::env_reset(env, rng);
    while (!state.done) {
      auto step = ilsuite::env_step(env, state, lqr.action(obs, state.step));
      total += step.reward;
      state = step.state;
      obs = step.observation;
    }
  }
  return total / episodes;
}

}  // namespace oracle
