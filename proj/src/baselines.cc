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

#include "svmpc/baselines.h"

#include <cmath>
#include <stdexcept>

#include "svmpc/mpc.h"

namespace svmpc {
namespace {

ParamSequence WeightedMean(const ParamSequence& theta, const RolloutBatch& batch,
                           const Eigen::VectorXd& w) {
  ParamSequence out = ParamSequence::Zero(theta.rows(), theta.cols());
  for (int s = 0; s < batch.size(); ++s) {
    if (w(s) != 0.0) out += w(s) * batch.controls[s];
  }
  return out;
}

}  // namespace

void BaselineConfig::Validate() const {
  if (horizon < 1 || samples < 1) {
    throw std::invalid_argument("baseline: horizon and samples must be >= 1");
  }
  if (!(variance > 0.0)) {
    throw std::invalid_argument("baseline: variance must be > 0");
  }
  if (warm_start_iters < 0 || iters_per_timestep < 0 || episode_length < 0 ||
      snapshot_stride < 0) {
    throw std::invalid_argument("baseline: counts must be >= 0");
  }
  ValidateLikelihood(likelihood());
}

LikelihoodSpec BaselineConfig::likelihood() const {
  if (kind == BaselineKind::kMppi) return ExponentiatedUtility{alpha};
  return ProbabilityOfLowCost{elite_fraction};
}

ParamSequence mppi_update(const ParamSequence& theta, const RolloutBatch& batch,
                          double alpha) {
  return WeightedMean(theta, batch,
                      sample_weights(batch.costs, ExponentiatedUtility{alpha}));
}

ParamSequence cem_update(const ParamSequence& theta, const RolloutBatch& batch,
                         double elite_fraction) {
  return WeightedMean(
      theta, batch,
      sample_weights(batch.costs, ProbabilityOfLowCost{elite_fraction}));
}

EpisodeRecord run_baseline_episode(const Environment& env,
                                   const BaselineConfig& cfg,
                                   std::uint64_t seed, int trial) {
  cfg.Validate();
  const int d = env.control_dim();
  StreamKey base;
  base.root = seed;
  base.trial = static_cast<std::uint64_t>(trial);

  auto improve = [&](ParamSequence theta, const State& x, StreamKey key,
                     int iterations) {
    for (int k = 0; k < iterations; ++k) {
      StreamKey it = key;
      it.iteration = key.iteration + static_cast<std::uint64_t>(k);
      const RolloutBatch batch =
          sample_rollouts({theta, cfg.variance}, env, x, cfg.samples, it);
      theta = cfg.kind == BaselineKind::kMppi
                  ? mppi_update(theta, batch, cfg.alpha)
                  : cem_update(theta, batch, cfg.elite_fraction);
    }
    return theta;
  };

  EpisodeRecord rec;
  rec.controller = cfg.kind == BaselineKind::kMppi ? "mppi" : "cem";
  rec.trial = trial;
  rec.seed = seed;
  rec.controls.resize(cfg.episode_length, d);
  rec.states.resize(cfg.episode_length + 1, env.state_dim());

  State x = env.initial_state();
  rec.states.row(0) = x.x.transpose();
  ParamSequence theta = ParamSequence::Zero(cfg.horizon, d);
  theta = improve(theta, x, base, cfg.warm_start_iters);

  for (int t = 0; t < cfg.episode_length; ++t) {
    StreamKey key = base;
    key.timestep = static_cast<std::uint64_t>(t);
    key.iteration = t == 0 && cfg.warm_start_iters > 0
                        ? static_cast<std::uint64_t>(cfg.warm_start_iters) + 1
                        : 0;
    theta = improve(std::move(theta), x, key, cfg.iters_per_timestep);

    if (cfg.snapshot_stride > 0 && t % cfg.snapshot_stride == 0) {
      rec.snapshots.push_back(snapshot_particles(env, {theta}, x, t));
    }

    const Eigen::VectorXd u = env.clamp_control(theta.row(0).transpose());
    rec.total_cost += env.running_cost(x, u);
    StreamKey ek = base;
    ek.timestep = key.timestep;
    ek.purpose = StreamPurpose::kExecution;
    RngStream exec_rng = ek.Stream(0);
    x = env.step(x, u, DynamicsMode::kTrue, &exec_rng);

    rec.controls.row(t) = u.transpose();
    rec.states.row(t + 1) = x.x.transpose();
    rec.selected.push_back(0);
    rec.weights.push_back({1.0});

    theta = shift_particles(ParticleSet::Uniform({theta})).particles[0];
  }
  rec.total_cost += env.terminal_cost(x);
  rec.crashed = x.crashed;
  rec.success = env.success(x);
  return rec;
}

}  // namespace svmpc
