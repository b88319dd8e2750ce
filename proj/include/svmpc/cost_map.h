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

#ifndef SVMPC_COST_MAP_H_
#define SVMPC_COST_MAP_H_

#include <vector>

#include <Eigen/Dense>

#include "svmpc/environment.h"

namespace svmpc {

struct GaussianComponent {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();
  double weight = 1.0;
};

// Smooth obstacle field: p_obs(x) = sum_k w_k N(x; mu_k, S_k).
class GaussianCostMap {
 public:
  explicit GaussianCostMap(std::vector<GaussianComponent> components);

  double density(const Eigen::Vector2d& x) const;
  Eigen::Vector2d density_gradient(const Eigen::Vector2d& x) const;
  // Sum of the component peak densities; an upper bound on density().
  double max_density() const;

  const std::vector<GaussianComponent>& components() const {
    return components_;
  }

 private:
  struct Cached {
    Eigen::Vector2d mean;
    Eigen::Matrix2d precision;
    double scale;  // w / (2 pi sqrt(det S))
  };
  std::vector<GaussianComponent> components_;
  std::vector<Cached> cached_;
};

struct PlanningParams {
  double dt = 0.1;
  int horizon = 64;
  Eigen::Vector2d start = Eigen::Vector2d(-3.0, -3.0);
  Eigen::Vector2d goal = Eigen::Vector2d(3.0, 3.0);
  double collision_scale = 1e5;
  double terminal_weight = 1000.0;
  std::vector<GaussianComponent> obstacles = DefaultObstacles();

  // Two equal blobs either side of the start-goal diagonal, wide enough that
  // the straight line is infeasible (p_obs >= 0.01 on it).
  static std::vector<GaussianComponent> DefaultObstacles();
  void Validate() const;
};

// Deterministic velocity-controlled point robot over a Gaussian cost map:
// x' = x + u dt, c(x) = scale * p_obs(x), c_T(x) = w_T |x - goal|^2.
class PlanningWorld final : public Environment {
 public:
  explicit PlanningWorld(PlanningParams params);

  int state_dim() const override { return 2; }
  int control_dim() const override { return 2; }
  double dt() const override { return params_.dt; }
  const ControlLimits& limits() const override { return limits_; }
  State initial_state() const override;

  State step(const State& state, const Eigen::VectorXd& u, DynamicsMode mode,
             RngStream* rng) const override;
  double running_cost(const State& state,
                      const Eigen::VectorXd& u) const override;
  double terminal_cost(const State& state) const override;
  bool success(const State& final_state) const override;

  double plan_cost(const Eigen::Vector2d& x) const;
  Eigen::Vector2d plan_cost_grad(const Eigen::Vector2d& x) const;
  double plan_terminal(const Eigen::Vector2d& x) const;
  Eigen::Vector2d plan_terminal_grad(const Eigen::Vector2d& x) const;

  const GaussianCostMap& cost_map() const { return map_; }
  const PlanningParams& params() const { return params_; }

 private:
  PlanningParams params_;
  GaussianCostMap map_;
  ControlLimits limits_;
};

}  // namespace svmpc

#endif  // SVMPC_COST_MAP_H_
