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

#ifndef SVMPC_EPISODE_RECORD_H_
#define SVMPC_EPISODE_RECORD_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace svmpc {

// Predicted (deterministic) position path of every particle at one step.
struct ParticleSnapshot {
  int timestep = 0;
  std::vector<Eigen::MatrixXd> paths;  // one (H+1) x n matrix per particle
};

// Everything an episode produced. T is the number of executed steps.
struct EpisodeRecord {
  std::string controller;
  int trial = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd controls;  // T x d
  Eigen::MatrixXd states;    // (T+1) x n
  std::vector<int> selected;                 // T entries
  std::vector<std::vector<double>> weights;  // T entries of m weights
  double total_cost = 0.0;
  bool crashed = false;
  bool success = false;
  // Set when the trial aborted (e.g. non-finite gradient); the rest of the
  // record then holds whatever was completed.
  bool failed = false;
  std::string error;
  std::vector<ParticleSnapshot> snapshots;

  int length() const { return static_cast<int>(controls.rows()); }

  bool operator==(const EpisodeRecord& other) const;
};

}  // namespace svmpc

#endif  // SVMPC_EPISODE_RECORD_H_
