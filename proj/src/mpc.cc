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

#include "svmpc/mpc.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "svmpc/parallel.h"

namespace svmpc {
namespace {

void ClampToLimits(ParamSequence& theta, const ControlLimits& limits) {
  for (Eigen::Index h = 0; h < theta.rows(); ++h) {
    theta.row(h) = theta.row(h)
                       .cwiseMax(limits.lower.transpose())
                       .cwiseMin(limits.upper.transpose());
  }
}

std::vector<RolloutBatch> SampleAll(const ParticleSet& set, const State& state,
                                    const MpcConfig& cfg,
                                    const Environment& env, StreamKey key) {
  std::vector<RolloutBatch> batches(set.size());
  parallel_for(set.size(), cfg.workers, [&](int i) {
    StreamKey k = key;
    k.particle = static_cast<std::uint64_t>(i);
    batches[i] = sample_rollouts({set.particles[i], cfg.variance}, env, state,
                                 cfg.samples, k);
  });
  return batches;
}

}  // namespace

void MpcConfig::Validate() const {
  if (horizon < 1) throw std::invalid_argument("mpc: horizon must be >= 1");
  if (particles < 1) throw std::invalid_argument("mpc: particles must be >= 1");
  if (samples < 1) throw std::invalid_argument("mpc: samples must be >= 1");
  if (!(step_size >= 0.0)) {
    throw std::invalid_argument("mpc: step_size must be >= 0");
  }
  if (warm_start_iters < 0 || iters_per_timestep < 0) {
    throw std::invalid_argument("mpc: iteration counts must be >= 0");
  }
  if (episode_length < 0) {
    throw std::invalid_argument("mpc: episode_length must be >= 0");
  }
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("mpc: variance must be > 0");
  }
  if (workers < 1) throw std::invalid_argument("mpc: workers must be >= 1");
  if (snapshot_stride < 0) {
    throw std::invalid_argument("mpc: snapshot_stride must be >= 0");
  }
  ValidateLikelihood(likelihood);
  kernel.Validate();
}

ParticleSet svmpc_update(const ParticleSet& set,
                         const std::vector<RolloutBatch>& batches,
                         const MpcConfig& cfg, const PriorSpec& prior,
                         const ControlLimits& limits) {
  const int m = set.size();
  if (static_cast<int>(batches.size()) != m) {
    throw std::invalid_argument("svmpc_update: one batch per particle needed");
  }
  std::vector<ParamSequence> grads(m);
  for (int i = 0; i < m; ++i) {
    try {
      grads[i] = likelihood_grad({set.particles[i], cfg.variance}, batches[i],
                                 cfg.likelihood) +
                 prior_log_grad(prior, set.particles[i]);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("svmpc: particle " + std::to_string(i) + ": " +
                               e.what());
    }
    if (!grads[i].allFinite()) {
      throw std::runtime_error("svmpc: non-finite gradient for particle " +
                               std::to_string(i));
    }
    clip_gradient(grads[i], cfg.gradient_clip);
  }
  ParticleSet next =
      svgd_step(set, svgd_direction(set, grads, cfg.kernel), cfg.step_size);
  for (auto& theta : next.particles) ClampToLimits(theta, limits);
  return next;
}

OptimizeResult svmpc_optimize(const ParticleSet& set, const State& state,
                              const MpcConfig& cfg, const Environment& env,
                              const PriorSpec& prior, const StreamKey& key,
                              int iterations) {
  OptimizeResult out;
  out.set = set;
  for (int k = 0; k < iterations; ++k) {
    StreamKey it = key;
    it.iteration = key.iteration + static_cast<std::uint64_t>(k);
    it.purpose = StreamPurpose::kGradient;
    const auto batches = SampleAll(out.set, state, cfg, env, it);
    out.set = svmpc_update(out.set, batches, cfg, prior, env.limits());
  }
  StreamKey wk = key;
  wk.iteration = key.iteration + static_cast<std::uint64_t>(iterations);
  wk.purpose = StreamPurpose::kWeighting;
  const auto batches = SampleAll(out.set, state, cfg, env, wk);
  out.log_likelihoods.resize(batches.size());
  for (std::size_t i = 0; i < batches.size(); ++i) {
    out.log_likelihoods[i] =
        log_likelihood_estimate(batches[i], cfg.likelihood);
  }
  PosteriorWeights pw = posterior_weights(out.set, out.log_likelihoods, prior);
  out.set.weights = std::move(pw.weights);
  out.weight_fallback = pw.fallback;
  return out;
}

ActionChoice select_action(const ParticleSet& set, ActionSelection mode,
                           RngStream* rng) {
  const int m = set.size();
  if (m < 1 || static_cast<int>(set.weights.size()) != m) {
    throw std::invalid_argument("select_action: malformed particle set");
  }
  ActionChoice out;
  if (mode == ActionSelection::kMap) {
    for (int i = 1; i < m; ++i) {
      if (set.weights[i] > set.weights[out.index]) out.index = i;
    }
  } else {
    if (rng == nullptr) {
      throw std::invalid_argument("select_action: categorical needs an rng");
    }
    const double u = rng->Uniform();
    double cumulative = 0.0;
    out.index = -1;
    for (int i = 0; i < m; ++i) {
      if (set.weights[i] <= 0.0) continue;
      cumulative += set.weights[i];
      out.index = i;
      if (cumulative > u) break;
    }
    if (out.index < 0) out.index = 0;
  }
  out.control = set.particles[out.index].row(0).transpose();
  return out;
}

ParticleSet shift_particles(const ParticleSet& set) {
  ParticleSet out = set;
  for (int i = 0; i < set.size(); ++i) {
    const Eigen::Index H = set.particles[i].rows();
    if (H > 1) {
      out.particles[i].topRows(H - 1) = set.particles[i].bottomRows(H - 1);
    }
  }
  return out;
}

UniformPrior uniform_prior(const ControlLimits& limits) {
  return UniformPrior{limits.lower, limits.upper};
}

PriorSpec update_prior(const ParticleSet& shifted_set,
                       const std::vector<double>& weights,
                       const MpcConfig& cfg, const ControlLimits& limits) {
  if (cfg.prior == PriorKind::kUniform) return uniform_prior(limits);
  if (weights.size() != shifted_set.particles.size()) {
    throw std::invalid_argument("update_prior: weight count mismatch");
  }
  return ShiftedGaussianMixture{cfg.mixture_variance(), shifted_set.particles,
                                weights};
}

ParticleSnapshot snapshot_particles(const Environment& env,
                                    const std::vector<ParamSequence>& means,
                                    const State& state, int timestep) {
  ParticleSnapshot snap;
  snap.timestep = timestep;
  snap.paths.resize(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    env.rollout(state, means[i], DynamicsMode::kDeterministic, nullptr,
                &snap.paths[i]);
  }
  return snap;
}

EpisodeRecord run_episode(const Environment& env, const MpcConfig& cfg,
                          std::uint64_t seed, int trial) {
  cfg.Validate();
  const int d = env.control_dim();
  const auto& limits = env.limits();
  const double jitter_var = cfg.init_jitter_variance >= 0.0
                                ? cfg.init_jitter_variance
                                : cfg.variance / 4.0;
  const double jitter = std::sqrt(jitter_var);

  StreamKey base;
  base.root = seed;
  base.trial = static_cast<std::uint64_t>(trial);

  std::vector<ParamSequence> init(cfg.particles);
  for (int i = 0; i < cfg.particles; ++i) {
    StreamKey k = base;
    k.particle = static_cast<std::uint64_t>(i);
    k.purpose = StreamPurpose::kInitialization;
    RngStream rng = k.Stream(0);
    init[i] = ParamSequence::Zero(cfg.horizon, d);
    for (Eigen::Index h = 0; h < init[i].rows(); ++h) {
      for (Eigen::Index j = 0; j < d; ++j) init[i](h, j) = jitter * rng.Normal();
    }
    ClampToLimits(init[i], limits);
  }
  ParticleSet set = ParticleSet::Uniform(std::move(init));
  PriorSpec prior = uniform_prior(limits);

  EpisodeRecord rec;
  rec.controller = "svmpc";
  rec.trial = trial;
  rec.seed = seed;
  rec.controls.resize(cfg.episode_length, d);
  rec.states.resize(cfg.episode_length + 1, env.state_dim());

  State x = env.initial_state();
  rec.states.row(0) = x.x.transpose();

  if (cfg.warm_start_iters > 0) {
    set = svmpc_optimize(set, x, cfg, env, prior, base, cfg.warm_start_iters)
              .set;
  }
  for (int t = 0; t < cfg.episode_length; ++t) {
    StreamKey key = base;
    key.timestep = static_cast<std::uint64_t>(t);
    // Iteration ids at t = 0 continue after the warm-start block.
    key.iteration =
        t == 0 && cfg.warm_start_iters > 0
            ? static_cast<std::uint64_t>(cfg.warm_start_iters) + 1
            : 0;
    OptimizeResult res = svmpc_optimize(set, x, cfg, env, prior, key,
                                        cfg.iters_per_timestep);
    set = std::move(res.set);

    if (cfg.snapshot_stride > 0 && t % cfg.snapshot_stride == 0) {
      rec.snapshots.push_back(snapshot_particles(env, set.particles, x, t));
    }

    StreamKey sk = base;
    sk.timestep = key.timestep;
    sk.purpose = StreamPurpose::kSelection;
    RngStream select_rng = sk.Stream(0);
    ActionChoice choice =
        select_action(set, cfg.action_selection, &select_rng);
    Eigen::VectorXd u = choice.control;
    if (cfg.sample_action) {
      const double sigma = std::sqrt(cfg.variance);
      for (Eigen::Index j = 0; j < u.size(); ++j) {
        u(j) += sigma * select_rng.Normal();
      }
    }
    u = env.clamp_control(u);

    rec.total_cost += env.running_cost(x, u);
    StreamKey ek = base;
    ek.timestep = key.timestep;
    ek.purpose = StreamPurpose::kExecution;
    RngStream exec_rng = ek.Stream(0);
    x = env.step(x, u, DynamicsMode::kTrue, &exec_rng);

    rec.controls.row(t) = u.transpose();
    rec.states.row(t + 1) = x.x.transpose();
    rec.selected.push_back(choice.index);
    rec.weights.push_back(set.weights);

    const std::vector<double> weights = set.weights;
    set = shift_particles(set);
    prior = update_prior(set, weights, cfg, limits);
  }
  rec.total_cost += env.terminal_cost(x);
  rec.crashed = x.crashed;
  rec.success = env.success(x);
  return rec;
}

}  // namespace svmpc
