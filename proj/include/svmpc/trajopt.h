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

#ifndef SVMPC_TRAJOPT_H_
#define SVMPC_TRAJOPT_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "svmpc/cost_map.h"
#include "svmpc/episode_record.h"
#include "svmpc/rng.h"
#include "svmpc/svgd.h"

namespace svmpc {

// Zero-acceleration random-walk prior over control sequences:
// u_0 ~ N(0, S), u_{k+1} = u_k + w_k, w_k ~ N(0, S) with S diagonal.
// Equivalently U = L W and Cov = L D L^T, whose precision is block
// tridiagonal.
struct SmoothnessPrior {
  int horizon = 0;
  Eigen::VectorXd step_variance;  // diagonal of S, one entry per dimension

  static SmoothnessPrior Isotropic(int horizon, int dim, double variance);

  int dim() const { return static_cast<int>(step_variance.size()); }
  void Validate() const;

  // -0.5 sum_k du_k^T S^-1 du_k with du_0 = u_0; the Gaussian normaliser is
  // dropped.
  double log_density(const ParamSequence& theta) const;

  // Cumulative sum of independent N(0, S) increments.
  ParamSequence sample(RngStream& rng) const;
};

// -Cov^{-1} vec(theta), evaluated through the banded precision.
ParamSequence smoothness_log_grad(const SmoothnessPrior& prior,
                                  const ParamSequence& theta);

// States x_0..x_T of x_{k+1} = x_k + theta_k dt.
Eigen::MatrixXd rollout_deterministic(const ParamSequence& theta,
                                      const Eigen::VectorXd& x0, double dt);

// C(theta) = sum_{k<T} c(x_k) + c_term(x_T) for the planning world.
double trajectory_cost(const PlanningWorld& world, const ParamSequence& theta,
                       const Eigen::VectorXd& x0);

// dC/dtheta by a reverse sweep over the single-integrator rollout.
ParamSequence cost_gradient(const PlanningWorld& world,
                            const ParamSequence& theta,
                            const Eigen::VectorXd& x0);

struct TrajOptConfig {
  int particles = 16;
  double step_size = 5e-4;
  int max_iterations = 500;
  double tolerance = 1e-4;  // on max_i |delta theta^i|_inf
  int refinement_iterations = 50;
  double refinement_step = 1e-4;
  int max_halvings = 10;
  double alpha = 1.0;
  double prior_variance = 0.05;  // per-step increment variance
  KernelSpec kernel;
  int workers = 1;
  std::vector<int> snapshot_iterations = {0, 10, 100};

  void Validate() const;
};

struct TrajOptResult {
  ParticleSet set;
  int best = 0;
  std::vector<double> log_posterior;  // per particle, after refinement
  int svgd_iterations = 0;
  bool converged = false;
  // refinement_traces[i][k]: log posterior of particle i after k steps.
  std::vector<std::vector<double>> refinement_traces;
  // State paths at the requested SVGD iterations plus the final set; the
  // final snapshot is labelled svgd_iterations + refinement_iterations.
  std::vector<ParticleSnapshot> snapshots;
};

double log_posterior(const PlanningWorld& world, const SmoothnessPrior& prior,
                     double alpha, const ParamSequence& theta,
                     const Eigen::VectorXd& x0);

ParamSequence log_posterior_grad(const PlanningWorld& world,
                                 const SmoothnessPrior& prior, double alpha,
                                 const ParamSequence& theta,
                                 const Eigen::VectorXd& x0);

// Samples particles from the smoothness prior, runs SVGD on the log
// posterior until the displacement falls below tolerance or the iteration
// cap, refines each particle with step-halving gradient ascent and picks the
// particle with the highest log posterior. Throws std::runtime_error when an
// iterate turns non-finite.
TrajOptResult svtrajopt_run(const PlanningWorld& world,
                            const Eigen::VectorXd& x0,
                            const TrajOptConfig& cfg, std::uint64_t seed);

}  // namespace svmpc

#endif  // SVMPC_TRAJOPT_H_
