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

#include "svmpc/cost_map.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace svmpc {

GaussianCostMap::GaussianCostMap(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
  cached_.reserve(components_.size());
  for (const auto& c : components_) {
    const double det = c.covariance.determinant();
    if (!(det > 0.0) || !(c.weight >= 0.0) ||
        (c.covariance - c.covariance.transpose()).cwiseAbs().maxCoeff() >
            1e-12) {
      throw std::invalid_argument(
          "GaussianCostMap: covariance must be SPD and weight >= 0");
    }
    cached_.push_back({c.mean, c.covariance.inverse(),
                       c.weight / (2.0 * std::numbers::pi * std::sqrt(det))});
  }
}

double GaussianCostMap::density(const Eigen::Vector2d& x) const {
  double p = 0.0;
  for (const auto& c : cached_) {
    const Eigen::Vector2d e = x - c.mean;
    p += c.scale * std::exp(-0.5 * e.dot(c.precision * e));
  }
  return p;
}

Eigen::Vector2d GaussianCostMap::density_gradient(
    const Eigen::Vector2d& x) const {
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (const auto& c : cached_) {
    const Eigen::Vector2d e = x - c.mean;
    const Eigen::Vector2d pe = c.precision * e;
    g -= c.scale * std::exp(-0.5 * e.dot(pe)) * pe;
  }
  return g;
}

double GaussianCostMap::max_density() const {
  double total = 0.0;
  for (const auto& c : cached_) total += c.scale;
  return total;
}

std::vector<GaussianComponent> PlanningParams::DefaultObstacles() {
  GaussianComponent a;
  a.mean = Eigen::Vector2d(-1.0, 0.8);
  a.covariance = 0.36 * Eigen::Matrix2d::Identity();
  a.weight = 1.0;
  GaussianComponent b = a;
  b.mean = Eigen::Vector2d(1.0, -0.8);
  return {a, b};
}

void PlanningParams::Validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("planning: dt must be > 0");
  if (horizon < 1) throw std::invalid_argument("planning: horizon must be >= 1");
  if (!(collision_scale >= 0.0) || !(terminal_weight >= 0.0)) {
    throw std::invalid_argument("planning: cost weights must be >= 0");
  }
}

PlanningWorld::PlanningWorld(PlanningParams params)
    : params_(std::move(params)), map_(params_.obstacles) {
  params_.Validate();
  const double inf = std::numeric_limits<double>::infinity();
  limits_.lower = Eigen::VectorXd::Constant(2, -inf);
  limits_.upper = Eigen::VectorXd::Constant(2, inf);
}

State PlanningWorld::initial_state() const {
  State s;
  s.x = params_.start;
  return s;
}

State PlanningWorld::step(const State& state, const Eigen::VectorXd& u,
                          DynamicsMode, RngStream*) const {
  State out = state;
  out.x = state.x + u * params_.dt;
  return out;
}

double PlanningWorld::running_cost(const State& state,
                                   const Eigen::VectorXd&) const {
  return plan_cost(state.x.head<2>());
}

double PlanningWorld::terminal_cost(const State& state) const {
  return plan_terminal(state.x.head<2>());
}

bool PlanningWorld::success(const State& final_state) const {
  return (final_state.x.head<2>() - params_.goal).norm() < 0.3;
}

double PlanningWorld::plan_cost(const Eigen::Vector2d& x) const {
  return params_.collision_scale * map_.density(x);
}

Eigen::Vector2d PlanningWorld::plan_cost_grad(const Eigen::Vector2d& x) const {
  return params_.collision_scale * map_.density_gradient(x);
}

double PlanningWorld::plan_terminal(const Eigen::Vector2d& x) const {
  return params_.terminal_weight * (x - params_.goal).squaredNorm();
}

Eigen::Vector2d PlanningWorld::plan_terminal_grad(
    const Eigen::Vector2d& x) const {
  return 2.0 * params_.terminal_weight * (x - params_.goal);
}

}  // namespace svmpc
