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

#ifndef SVMPC_BASELINES_H_
#define SVMPC_BASELINES_H_

#include <cstdint>

#include "svmpc/environment.h"
#include "svmpc/episode_record.h"
#include "svmpc/model.h"

namespace svmpc {

enum class BaselineKind { kMppi, kCem };

// Single-mean sampling MPC. Shares horizon shifting, warm start, control
// clamping and stream keying with the Stein variational controller.
struct BaselineConfig {
  BaselineKind kind = BaselineKind::kMppi;
  double alpha = 1e-3;           // MPPI inverse temperature
  double elite_fraction = 0.1;   // CEM
  int horizon = 64;
  int samples = 32;
  double variance = 100.0;
  int warm_start_iters = 30;
  int iters_per_timestep = 1;
  int episode_length = 300;
  int snapshot_stride = 0;

  void Validate() const;
  LikelihoodSpec likelihood() const;
};

// theta' = sum_s w_s U_s with exponentiated-utility weights.
ParamSequence mppi_update(const ParamSequence& theta, const RolloutBatch& batch,
                          double alpha);

// Mean of the ceil(fraction * N) lowest-cost samples (ties by index).
ParamSequence cem_update(const ParamSequence& theta, const RolloutBatch& batch,
                         double elite_fraction);

EpisodeRecord run_baseline_episode(const Environment& env,
                                   const BaselineConfig& cfg,
                                   std::uint64_t seed, int trial = 0);

}  // namespace svmpc

#endif  // SVMPC_BASELINES_H_
