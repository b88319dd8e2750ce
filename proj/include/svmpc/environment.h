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

#ifndef SVMPC_ENVIRONMENT_H_
#define SVMPC_ENVIRONMENT_H_

#include <Eigen/Dense>

#include "svmpc/rng.h"

namespace svmpc {

struct State {
  Eigen::VectorXd x;
  bool crashed = false;
};

// kTrue executes on the plant, kModel is the controller's internal rollout
// model and kDeterministic disables all process noise.
enum class DynamicsMode { kTrue, kModel, kDeterministic };

struct ControlLimits {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

// Everything a controller needs from a world. Implementations are immutable
// after construction, so one instance may serve concurrent rollouts.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual double dt() const = 0;
  virtual const ControlLimits& limits() const = 0;
  virtual State initial_state() const = 0;

  // rng may be null only when the mode draws no noise.
  virtual State step(const State& state, const Eigen::VectorXd& u,
                     DynamicsMode mode, RngStream* rng) const = 0;

  virtual double running_cost(const State& state,
                              const Eigen::VectorXd& u) const = 0;
  virtual double terminal_cost(const State& state) const = 0;

  // Propagates x0 through the H rows of controls and returns
  // terminal_cost(x_H) + sum_h running_cost(x_h, u_h). When states is
  // non-null it receives the (H+1) x n trajectory.
  virtual double rollout(const State& x0, const Eigen::MatrixXd& controls,
                         DynamicsMode mode, RngStream* rng,
                         Eigen::MatrixXd* states) const;

  // Whether a final state counts as task completion; defaults to never.
  virtual bool success(const State& final_state) const;

  Eigen::VectorXd clamp_control(const Eigen::VectorXd& u) const;
  void clamp_controls(Eigen::MatrixXd& controls) const;
};

}  // namespace svmpc

#endif  // SVMPC_ENVIRONMENT_H_
