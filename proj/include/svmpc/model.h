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

#ifndef SVMPC_MODEL_H_
#define SVMPC_MODEL_H_

#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "svmpc/environment.h"
#include "svmpc/rng.h"
#include "svmpc/svgd.h"

namespace svmpc {

// pi_theta(U) = N(U; theta, variance * I), shared across timesteps.
struct GaussianOpenLoopPolicy {
  ParamSequence mean;
  double variance = 1.0;
};

// Exponentiated utility: L = exp(-alpha C).
struct ExponentiatedUtility {
  double alpha = 1.0;
};

// Probability of low cost: L = 1[C <= C_max], C_max adapted per batch so
// that ceil(elite_fraction * N) samples pass.
struct ProbabilityOfLowCost {
  double elite_fraction = 0.1;
};

using LikelihoodSpec = std::variant<ExponentiatedUtility, ProbabilityOfLowCost>;

void ValidateLikelihood(const LikelihoodSpec& spec);

// Box prior over every control entry. Its log-density is constant inside the
// bounds and -inf outside.
struct UniformPrior {
  Eigen::VectorXd lower;  // per control dimension
  Eigen::VectorXd upper;
};

// q(theta) = sum_i w_i N(theta; center_i, component_variance * I), the shift
// of the previous weighted particle set.
struct ShiftedGaussianMixture {
  double component_variance = 1.0;
  std::vector<ParamSequence> centers;
  std::vector<double> weights;
};

using PriorSpec = std::variant<UniformPrior, ShiftedGaussianMixture>;

struct RolloutBatch {
  std::vector<ParamSequence> controls;   // N, each H x d, clamped
  std::vector<Eigen::MatrixXd> states;   // N, each (H+1) x n
  Eigen::VectorXd costs;                 // N

  int size() const { return static_cast<int>(controls.size()); }
};

// Draws N control sequences theta + sigma * noise (clamped to the control
// limits) and propagates each through the model dynamics from x0. Sample s
// uses stream key.Stream(s), so batches are reproducible and independent of
// evaluation order.
RolloutBatch sample_rollouts(const GaussianOpenLoopPolicy& policy,
                             const Environment& env, const State& x0, int N,
                             const StreamKey& key);

// d/d theta log N(U; theta, variance I) = (U - theta) / variance.
ParamSequence policy_score(const GaussianOpenLoopPolicy& policy,
                           const ParamSequence& U);

// Self-normalised sample weights L(tau_s) / sum L.
Eigen::VectorXd sample_weights(const Eigen::VectorXd& costs,
                               const LikelihoodSpec& spec);

// Indices of the ceil(fraction * N) lowest costs, ties broken by index.
std::vector<int> elite_indices(const Eigen::VectorXd& costs, double fraction);

// Monte-Carlo estimate of grad_theta log E[L(tau)].
ParamSequence likelihood_grad(const GaussianOpenLoopPolicy& policy,
                              const RolloutBatch& batch,
                              const LikelihoodSpec& spec);

// log of the Monte-Carlo estimate of E[L(tau)].
double log_likelihood_estimate(const RolloutBatch& batch,
                               const LikelihoodSpec& spec);

struct PosteriorWeights {
  std::vector<double> weights;
  // True when every particle had zero prior mass and uniform weights were
  // substituted.
  bool fallback = false;
};

PosteriorWeights posterior_weights(const ParticleSet& set,
                                   const std::vector<double>& log_likelihoods,
                                   const PriorSpec& prior);

// log q(theta) up to a constant; -inf outside a uniform prior's support.
double prior_log_density(const PriorSpec& prior, const ParamSequence& theta);

// grad_theta log q(theta). Throws std::domain_error for a uniform prior
// evaluated outside its bounds and std::invalid_argument for a mixture with
// no components.
ParamSequence prior_log_grad(const PriorSpec& prior, const ParamSequence& theta);

// log(sum exp(v)) with max shift; -inf for empty or all -inf input.
double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace svmpc

#endif  // SVMPC_MODEL_H_
