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

#ifndef SVMPC_MPC_H_
#define SVMPC_MPC_H_

#include <cstdint>
#include <vector>

#include "svmpc/environment.h"
#include "svmpc/episode_record.h"
#include "svmpc/model.h"
#include "svmpc/rng.h"
#include "svmpc/svgd.h"

namespace svmpc {

enum class ActionSelection { kMap, kCategorical };
enum class PriorKind { kUniform, kShiftedMixture };

// Stein variational MPC settings. Defaults are the planar-navigation values.
struct MpcConfig {
  int horizon = 64;
  int particles = 32;
  int samples = 8;  // rollouts per particle and iteration
  double step_size = 10.0;
  int warm_start_iters = 30;
  int iters_per_timestep = 1;
  int episode_length = 300;
  LikelihoodSpec likelihood = ExponentiatedUtility{1e-3};
  PriorKind prior = PriorKind::kUniform;
  // Mixture component variance; <= 0 means "use the policy variance".
  double prior_variance = 0.0;
  KernelSpec kernel;
  double variance = 100.0;  // policy variance sigma^2
  ActionSelection action_selection = ActionSelection::kMap;
  // Execute u ~ pi instead of the selected particle's first mean.
  bool sample_action = false;
  // Initial jitter variance around the prior mean; < 0 means sigma^2 / 4.
  double init_jitter_variance = -1.0;
  double gradient_clip = 0.0;  // <= 0 disables
  int workers = 1;             // per-particle gradient threads
  int snapshot_stride = 0;     // record particle paths every k steps; 0 = off

  void Validate() const;
  double mixture_variance() const {
    return prior_variance > 0.0 ? prior_variance : variance;
  }
};

struct OptimizeResult {
  ParticleSet set;  // weights hold the posterior weights
  std::vector<double> log_likelihoods;
  bool weight_fallback = false;
};

// One SVGD iteration from pre-sampled per-particle batches: likelihood and
// prior gradients, kernelised direction, step, and projection of the means
// onto the control limits. Weights are carried over unchanged.
ParticleSet svmpc_update(const ParticleSet& set,
                         const std::vector<RolloutBatch>& batches,
                         const MpcConfig& cfg, const PriorSpec& prior,
                         const ControlLimits& limits);

// Runs `iterations` sample-then-update rounds from `state`, then re-weights
// the particles with a fresh batch. Iteration k draws from stream family
// key with key.iteration + k. Throws std::runtime_error naming the particle
// when a gradient turns non-finite.
OptimizeResult svmpc_optimize(const ParticleSet& set, const State& state,
                              const MpcConfig& cfg, const Environment& env,
                              const PriorSpec& prior, const StreamKey& key,
                              int iterations);

struct ActionChoice {
  int index = 0;
  Eigen::VectorXd control;
};

// kMap: argmax of the weights, ties to the lowest index. kCategorical:
// index ~ Cat(weights) using rng. The control is the first row of the
// chosen particle.
ActionChoice select_action(const ParticleSet& set, ActionSelection mode,
                           RngStream* rng);

// Drops the first row of every particle and repeats the last one.
ParticleSet shift_particles(const ParticleSet& set);

// Prior for the next step: the weighted mixture over the shifted particles,
// or the uniform prior over the control limits.
PriorSpec update_prior(const ParticleSet& shifted_set,
                       const std::vector<double>& weights,
                       const MpcConfig& cfg, const ControlLimits& limits);

UniformPrior uniform_prior(const ControlLimits& limits);

// Receding-horizon episode. Pure function of (env, cfg, seed, trial).
EpisodeRecord run_episode(const Environment& env, const MpcConfig& cfg,
                          std::uint64_t seed, int trial = 0);

// Deterministic state paths of every particle from `state`.
ParticleSnapshot snapshot_particles(const Environment& env,
                                    const std::vector<ParamSequence>& means,
                                    const State& state, int timestep);

}  // namespace svmpc

#endif  // SVMPC_MPC_H_
