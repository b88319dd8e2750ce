// Copyright 2026 The SV-MPC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svmpc/planar_nav.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace svmpc {
namespace {

struct PointState {
  Eigen::Vector2d pos;
  Eigen::Vector2d vel;
  bool crashed;
};

double SegmentDistanceSquared(const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b,
                              const Eigen::Vector2d& c) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp((c - a).dot(ab) / len2, 0.0, 1.0);
  return (a + t * ab - c).squaredNorm();
}

}  // namespace

std::vector<Eigen::Vector2d> ObstacleGrid::centers() const {
  std::vector<Eigen::Vector2d> out;
  out.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      out.emplace_back(center.x() + (c - 0.5 * (cols - 1)) * spacing,
                       center.y() + (r - 0.5 * (rows - 1)) * spacing);
    }
  }
  return out;
}

bool ObstacleGrid::contains(const Eigen::Vector2d& p) const {
  for (const auto& c : centers()) {
    if ((p - c).squaredNorm() <= radius * radius) return true;
  }
  return false;
}

bool ObstacleGrid::segment_hits(const Eigen::Vector2d& a,
                                const Eigen::Vector2d& b) const {
  for (const auto& c : centers()) {
    if (SegmentDistanceSquared(a, b, c) <= radius * radius) return true;
  }
  return false;
}

void NavParams::Validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("planar navigation: " + what);
  };
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(dynamics_noise >= 0.0)) fail("dynamics noise must be >= 0");
  if (!(control_limit > 0.0)) fail("control limit must be positive");
  if (grid.rows < 0 || grid.cols < 0) fail("grid size must be >= 0");
  if (!(grid.radius >= 0.0)) fail("obstacle radius must be >= 0");
  if (grid.rows * grid.cols > 1 && !(grid.spacing > 2.0 * grid.radius)) {
    fail("obstacles overlap (spacing <= 2 * radius)");
  }
  if (!(grid.goal_radius > 0.0)) fail("goal radius must be positive");
  if (grid.contains(start)) fail("start lies inside an obstacle");
  if (grid.contains(grid.goal)) fail("goal lies inside an obstacle");
}

PlanarNavigation::PlanarNavigation(NavParams params)
    : params_(std::move(params)) {
  params_.Validate();
  limits_.lower = Eigen::VectorXd::Constant(2, -params_.control_limit);
  limits_.upper = Eigen::VectorXd::Constant(2, params_.control_limit);
  obstacles_ = params_.grid.centers();
}

State PlanarNavigation::initial_state() const {
  State s;
  s.x.resize(4);
  s.x << params_.start, params_.start_velocity;
  return s;
}

bool PlanarNavigation::noisy(DynamicsMode mode) const {
  if (params_.dynamics_noise <= 0.0) return false;
  switch (mode) {
    case DynamicsMode::kTrue:
      return true;
    case DynamicsMode::kModel:
      return params_.model_noise;
    case DynamicsMode::kDeterministic:
      return false;
  }
  return false;
}

namespace {

// One integrator step shared by step() and the batched rollout so both
// produce bit-identical trajectories.
inline void Advance(PointState& s, const Eigen::Vector2d& u, double dt,
                    double limit, double noise_std, RngStream* rng,
                    const std::vector<Eigen::Vector2d>& obstacles,
                    double radius) {
  if (s.crashed) return;
  const Eigen::Vector2d a = u.cwiseMax(-limit).cwiseMin(limit);
  Eigen::Vector2d w = Eigen::Vector2d::Zero();
  if (noise_std > 0.0) {
    const double wx = rng->Normal();
    const double wy = rng->Normal();
    w = noise_std * Eigen::Vector2d(wx, wy);
  }
  const Eigen::Vector2d next_pos = s.pos + s.vel * dt;
  const double r2 = radius * radius;
  for (const auto& c : obstacles) {
    if (SegmentDistanceSquared(s.pos, next_pos, c) <= r2) {
      s.crashed = true;
      return;
    }
  }
  s.vel = s.vel + a * dt + w;
  s.pos = next_pos;
}

}  // namespace

State PlanarNavigation::step(const State& state, const Eigen::VectorXd& u,
                             DynamicsMode mode, RngStream* rng) const {
  const bool use_noise = noisy(mode);
  if (use_noise && rng == nullptr) {
    throw std::invalid_argument("PlanarNavigation::step: missing rng");
  }
  PointState s{state.x.head<2>(), state.x.tail<2>(), state.crashed};
  Advance(s, u.head<2>(), params_.dt, params_.control_limit,
          use_noise ? std::sqrt(params_.dynamics_noise) : 0.0, rng, obstacles_,
          params_.grid.radius);
  State out;
  out.x.resize(4);
  out.x << s.pos, s.vel;
  out.crashed = s.crashed;
  return out;
}

double PlanarNavigation::running_cost(const State& state,
                                      const Eigen::VectorXd& u) const {
  const NavCostWeights& w = params_.costs;
  const Eigen::Vector2d e = state.x.head<2>() - params_.grid.goal;
  return w.position * e.squaredNorm() +
         w.velocity * state.x.tail<2>().squaredNorm() +
         w.control * u.head<2>().squaredNorm();
}

double PlanarNavigation::terminal_cost(const State& state) const {
  const NavCostWeights& w = params_.costs;
  const Eigen::Vector2d e = state.x.head<2>() - params_.grid.goal;
  return w.terminal_position * e.squaredNorm() +
         w.terminal_velocity * state.x.tail<2>().squaredNorm();
}

double PlanarNavigation::rollout(const State& x0,
                                 const Eigen::MatrixXd& controls,
                                 DynamicsMode mode, RngStream* rng,
                                 Eigen::MatrixXd* states) const {
  const bool use_noise = noisy(mode);
  if (use_noise && rng == nullptr) {
    throw std::invalid_argument("PlanarNavigation::rollout: missing rng");
  }
  const double noise_std = use_noise ? std::sqrt(params_.dynamics_noise) : 0.0;
  const NavCostWeights& w = params_.costs;
  const Eigen::Vector2d goal = params_.grid.goal;
  const auto horizon = controls.rows();
  if (states != nullptr) {
    states->resize(horizon + 1, 4);
    states->row(0) = x0.x.transpose();
  }
  PointState s{x0.x.head<2>(), x0.x.tail<2>(), x0.crashed};
  double cost = 0.0;
  for (Eigen::Index h = 0; h < horizon; ++h) {
    const Eigen::Vector2d u = controls.row(h).transpose();
    cost += w.position * (s.pos - goal).squaredNorm() +
            w.velocity * s.vel.squaredNorm() + w.control * u.squaredNorm();
    Advance(s, u, params_.dt, params_.control_limit, noise_std, rng,
            obstacles_, params_.grid.radius);
    if (states != nullptr) {
      states->row(h + 1) << s.pos.transpose(), s.vel.transpose();
    }
  }
  return cost + w.terminal_position * (s.pos - goal).squaredNorm() +
         w.terminal_velocity * s.vel.squaredNorm();
}

bool PlanarNavigation::success(const State& final_state) const {
  return !final_state.crashed &&
         (final_state.x.head<2>() - params_.grid.goal).norm() <
             params_.grid.goal_radius;
}

bool nav_success(const EpisodeRecord& record, const ObstacleGrid& grid) {
  if (record.crashed || record.states.rows() == 0) return false;
  const Eigen::Vector2d final_pos =
      record.states.row(record.states.rows() - 1).head<2>().transpose();
  return (final_pos - grid.goal).norm() < grid.goal_radius;
}

}  // namespace svmpc
