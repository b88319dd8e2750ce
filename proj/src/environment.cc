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

#include "svmpc/environment.h"

namespace svmpc {

double Environment::rollout(const State& x0, const Eigen::MatrixXd& controls,
                            DynamicsMode mode, RngStream* rng,
                            Eigen::MatrixXd* states) const {
  const auto horizon = controls.rows();
  if (states != nullptr) {
    states->resize(horizon + 1, state_dim());
    states->row(0) = x0.x.transpose();
  }
  State x = x0;
  double cost = 0.0;
  for (Eigen::Index h = 0; h < horizon; ++h) {
    const Eigen::VectorXd u = controls.row(h).transpose();
    cost += running_cost(x, u);
    x = step(x, u, mode, rng);
    if (states != nullptr) states->row(h + 1) = x.x.transpose();
  }
  return cost + terminal_cost(x);
}

bool Environment::success(const State&) const { return false; }

Eigen::VectorXd Environment::clamp_control(const Eigen::VectorXd& u) const {
  return u.cwiseMax(limits().lower).cwiseMin(limits().upper);
}

void Environment::clamp_controls(Eigen::MatrixXd& controls) const {
  const ControlLimits& lim = limits();
  for (Eigen::Index h = 0; h < controls.rows(); ++h) {
    controls.row(h) = controls.row(h)
                          .cwiseMax(lim.lower.transpose())
                          .cwiseMin(lim.upper.transpose());
  }
}

}  // namespace svmpc
