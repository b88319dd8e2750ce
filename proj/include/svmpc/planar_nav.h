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

#ifndef SVMPC_PLANAR_NAV_H_
#define SVMPC_PLANAR_NAV_H_

#include <vector>

#include <Eigen/Dense>

#include "svmpc/environment.h"
#include "svmpc/episode_record.h"

namespace svmpc {

// Rows x cols circular obstacles on a regular lattice centred at `center`.
struct ObstacleGrid {
  int rows = 4;
  int cols = 4;
  double radius = 0.4;
  double spacing = 2.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Eigen::Vector2d goal = Eigen::Vector2d(4.5, 4.5);
  double goal_radius = 0.5;

  std::vector<Eigen::Vector2d> centers() const;
  bool contains(const Eigen::Vector2d& p) const;
  // True when the segment a->b touches any obstacle disc.
  bool segment_hits(const Eigen::Vector2d& a, const Eigen::Vector2d& b) const;
};

struct NavCostWeights {
  double position = 0.5;
  double velocity = 0.25;
  double control = 0.2;
  double terminal_position = 1000.0;
  double terminal_velocity = 0.1;
};

struct NavParams {
  double dt = 0.015;
  double dynamics_noise = 0.1;  // variance added to velocity each step
  double control_limit = 50.0;
  Eigen::Vector2d start = Eigen::Vector2d(-4.5, -4.5);
  Eigen::Vector2d start_velocity = Eigen::Vector2d::Zero();
  // Whether kModel rollouts draw dynamics noise like the true plant.
  bool model_noise = true;
  ObstacleGrid grid;
  NavCostWeights costs;

  // Throws std::invalid_argument naming the violated constraint.
  void Validate() const;
};

// Holonomic point robot with double-integrator dynamics, additive velocity
// noise and a crash latch. State = (px, py, vx, vy), control = acceleration.
class PlanarNavigation final : public Environment {
 public:
  explicit PlanarNavigation(NavParams params);

  int state_dim() const override { return 4; }
  int control_dim() const override { return 2; }
  double dt() const override { return params_.dt; }
  const ControlLimits& limits() const override { return limits_; }
  State initial_state() const override;

  State step(const State& state, const Eigen::VectorXd& u, DynamicsMode mode,
             RngStream* rng) const override;
  double running_cost(const State& state,
                      const Eigen::VectorXd& u) const override;
  double terminal_cost(const State& state) const override;
  double rollout(const State& x0, const Eigen::MatrixXd& controls,
                 DynamicsMode mode, RngStream* rng,
                 Eigen::MatrixXd* states) const override;
  bool success(const State& final_state) const override;

  const NavParams& params() const { return params_; }

 private:
  bool noisy(DynamicsMode mode) const;

  NavParams params_;
  ControlLimits limits_;
  std::vector<Eigen::Vector2d> obstacles_;
};

// Not crashed and strictly inside the goal radius at the final state.
bool nav_success(const EpisodeRecord& record, const ObstacleGrid& grid);

}  // namespace svmpc

#endif  // SVMPC_PLANAR_NAV_H_
