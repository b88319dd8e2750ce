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

#include "svmpc/episode_record.h"

namespace svmpc {
namespace {

bool SameMatrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.size() == 0 || (a.array() == b.array()).all());
}

}  // namespace

bool EpisodeRecord::operator==(const EpisodeRecord& other) const {
  if (controller != other.controller || trial != other.trial ||
      seed != other.seed || !SameMatrix(controls, other.controls) ||
      !SameMatrix(states, other.states) || selected != other.selected ||
      weights != other.weights || total_cost != other.total_cost ||
      crashed != other.crashed || success != other.success ||
      failed != other.failed || error != other.error ||
      snapshots.size() != other.snapshots.size()) {
    return false;
  }
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const auto& a = snapshots[i];
    const auto& b = other.snapshots[i];
    if (a.timestep != b.timestep || a.paths.size() != b.paths.size()) {
      return false;
    }
    for (std::size_t j = 0; j < a.paths.size(); ++j) {
      if (!SameMatrix(a.paths[j], b.paths[j])) return false;
    }
  }
  return true;
}

}  // namespace svmpc
