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

#include "svmpc/trajopt.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "svmpc/parallel.h"

namespace svmpc {

SmoothnessPrior SmoothnessPrior::Isotropic(int horizon, int dim,
                                           double variance) {
  SmoothnessPrior p;
  p.horizon = horizon;
  p.step_variance = Eigen::VectorXd::Constant(dim, variance);
  p.Validate();
  return p;
}

void SmoothnessPrior::Validate() const {
  if (horizon < 1 || step_variance.size() < 1) {
    throw std::invalid_argument("smoothness prior: empty shape");
  }
  if (!(step_variance.array() > 0.0).all()) {
    throw std::invalid_argument("smoothness prior: variances must be > 0");
  }
}

double SmoothnessPrior::log_density(const ParamSequence& theta) const {
  const Eigen::RowVectorXd inv = step_variance.cwiseInverse().transpose();
  double total = theta.row(0).cwiseAbs2().cwiseProduct(inv).sum();
  for (Eigen::Index k = 1; k < theta.rows(); ++k) {
    total += (theta.row(k) - theta.row(k - 1)).cwiseAbs2().cwiseProduct(inv).sum();
  }
  return -0.5 * total;
}

ParamSequence SmoothnessPrior::sample(RngStream& rng) const {
  const Eigen::VectorXd sd = step_variance.cwiseSqrt();
  ParamSequence U(horizon, dim());
  for (int k = 0; k < horizon; ++k) {
    for (int j = 0; j < dim(); ++j) {
      const double w = sd(j) * rng.Normal();
      U(k, j) = (k == 0 ? 0.0 : U(k - 1, j)) + w;
    }
  }
  return U;
}

ParamSequence smoothness_log_grad(const SmoothnessPrior& prior,
                                  const ParamSequence& theta) {
  if (theta.rows() != prior.horizon || theta.cols() != prior.dim()) {
    throw std::invalid_argument("smoothness_log_grad: shape mismatch");
  }
  const Eigen::RowVectorXd inv = prior.step_variance.cwiseInverse().transpose();
  const Eigen::Index T = theta.rows();
  // du_k = u_k - u_{k-1}; d/du_k of -0.5 sum |du|^2_S = -S^-1 (du_k - du_{k+1})
  ParamSequence du(T, theta.cols());
  du.row(0) = theta.row(0);
  for (Eigen::Index k = 1; k < T; ++k) du.row(k) = theta.row(k) - theta.row(k - 1);
  ParamSequence grad(T, theta.cols());
  for (Eigen::Index k = 0; k < T; ++k) {
    Eigen::RowVectorXd r = du.row(k);
    if (k + 1 < T) r -= du.row(k + 1);
    grad.row(k) = -r.cwiseProduct(inv);
  }
  return grad;
}

Eigen::MatrixXd rollout_deterministic(const ParamSequence& theta,
                                      const Eigen::VectorXd& x0, double dt) {
  if (theta.cols() != x0.size()) {
    throw std::invalid_argument("rollout_deterministic: dimension mismatch");
  }
  Eigen::MatrixXd X(theta.rows() + 1, x0.size());
  X.row(0) = x0.transpose();
  for (Eigen::Index k = 0; k < theta.rows(); ++k) {
    X.row(k + 1) = X.row(k) + dt * theta.row(k);
  }
  return X;
}

double trajectory_cost(const PlanningWorld& world, const ParamSequence& theta,
                       const Eigen::VectorXd& x0) {
  const Eigen::MatrixXd X = rollout_deterministic(theta, x0, world.dt());
  const Eigen::Index T = theta.rows();
  double c = world.plan_terminal(X.row(T).transpose());
  for (Eigen::Index k = 0; k < T; ++k) {
    c += world.plan_cost(X.row(k).transpose());
  }
  return c;
}

ParamSequence cost_gradient(const PlanningWorld& world,
                            const ParamSequence& theta,
                            const Eigen::VectorXd& x0) {
  const Eigen::MatrixXd X = rollout_deterministic(theta, x0, world.dt());
  const Eigen::Index T = theta.rows();
  ParamSequence grad(T, theta.cols());
  Eigen::Vector2d acc = world.plan_terminal_grad(X.row(T).transpose());
  for (Eigen::Index k = T - 1; k >= 0; --k) {
    grad.row(k) = world.dt() * acc.transpose();
    acc += world.plan_cost_grad(X.row(k).transpose());
  }
  return grad;
}

double log_posterior(const PlanningWorld& world, const SmoothnessPrior& prior,
                     double alpha, const ParamSequence& theta,
                     const Eigen::VectorXd& x0) {
  return -alpha * trajectory_cost(world, theta, x0) + prior.log_density(theta);
}

ParamSequence log_posterior_grad(const PlanningWorld& world,
                                 const SmoothnessPrior& prior, double alpha,
                                 const ParamSequence& theta,
                                 const Eigen::VectorXd& x0) {
  return -alpha * cost_gradient(world, theta, x0) +
         smoothness_log_grad(prior, theta);
}

void TrajOptConfig::Validate() const {
  if (particles < 1) throw std::invalid_argument("trajopt: particles must be >= 1");
  if (!(step_size > 0.0) || !(refinement_step > 0.0)) {
    throw std::invalid_argument("trajopt: step sizes must be > 0");
  }
  if (max_iterations < 0 || refinement_iterations < 0 || max_halvings < 0) {
    throw std::invalid_argument("trajopt: iteration counts must be >= 0");
  }
  if (!(tolerance > 0.0) || !(alpha > 0.0) || !(prior_variance > 0.0)) {
    throw std::invalid_argument(
        "trajopt: tolerance, alpha and prior variance must be > 0");
  }
  if (workers < 1) throw std::invalid_argument("trajopt: workers must be >= 1");
  kernel.Validate();
}

TrajOptResult svtrajopt_run(const PlanningWorld& world,
                            const Eigen::VectorXd& x0,
                            const TrajOptConfig& cfg, std::uint64_t seed) {
  cfg.Validate();
  const int m = cfg.particles;
  const int T = world.params().horizon;
  const SmoothnessPrior prior =
      SmoothnessPrior::Isotropic(T, world.control_dim(), cfg.prior_variance);

  std::vector<ParamSequence> init(m);
  for (int i = 0; i < m; ++i) {
    StreamKey key;
    key.root = seed;
    key.particle = static_cast<std::uint64_t>(i);
    key.purpose = StreamPurpose::kPlanner;
    RngStream rng = key.Stream(0);
    init[i] = prior.sample(rng);
  }

  TrajOptResult out;
  out.set = ParticleSet::Uniform(std::move(init));
  auto snapshot = [&](int label) {
    ParticleSnapshot snap;
    snap.timestep = label;
    for (const auto& theta : out.set.particles) {
      snap.paths.push_back(rollout_deterministic(theta, x0, world.dt()));
    }
    out.snapshots.push_back(std::move(snap));
  };
  auto wants_snapshot = [&](int it) {
    return std::find(cfg.snapshot_iterations.begin(),
                     cfg.snapshot_iterations.end(),
                     it) != cfg.snapshot_iterations.end();
  };

  std::vector<ParamSequence> grads(m);
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    if (wants_snapshot(it)) snapshot(it);
    parallel_for(m, cfg.workers, [&](int i) {
      grads[i] = log_posterior_grad(world, prior, cfg.alpha,
                                    out.set.particles[i], x0);
    });
    const auto phi = svgd_direction(out.set, grads, cfg.kernel);
    double displacement = 0.0;
    for (int i = 0; i < m; ++i) {
      const double d = cfg.step_size * phi[i].cwiseAbs().maxCoeff();
      if (!std::isfinite(d)) {
        throw std::runtime_error("svtrajopt: non-finite update for particle " +
                                 std::to_string(i) + " at iteration " +
                                 std::to_string(it));
      }
      displacement = std::max(displacement, d);
    }
    out.set = svgd_step(out.set, phi, cfg.step_size);
    if (displacement < cfg.tolerance) {
      out.converged = true;
      ++it;
      break;
    }
  }
  out.svgd_iterations = it;

  out.refinement_traces.assign(m, {});
  out.log_posterior.assign(m, 0.0);
  parallel_for(m, cfg.workers, [&](int i) {
    ParamSequence& theta = out.set.particles[i];
    auto& trace = out.refinement_traces[i];
    double lp = log_posterior(world, prior, cfg.alpha, theta, x0);
    trace.push_back(lp);
    for (int k = 0; k < cfg.refinement_iterations; ++k) {
      const ParamSequence g =
          log_posterior_grad(world, prior, cfg.alpha, theta, x0);
      double step = cfg.refinement_step;
      for (int h = 0; h <= cfg.max_halvings; ++h, step *= 0.5) {
        ParamSequence candidate = theta + step * g;
        const double clp =
            log_posterior(world, prior, cfg.alpha, candidate, x0);
        if (std::isfinite(clp) && clp >= lp) {
          theta = std::move(candidate);
          lp = clp;
          break;
        }
      }
      trace.push_back(lp);
    }
    out.log_posterior[i] = lp;
  });
  for (const auto& theta : out.set.particles) {
    if (!theta.allFinite()) {
      throw std::runtime_error("svtrajopt: non-finite particle after refinement");
    }
  }
  snapshot(out.svgd_iterations + cfg.refinement_iterations);

  out.best = static_cast<int>(
      std::max_element(out.log_posterior.begin(), out.log_posterior.end()) -
      out.log_posterior.begin());
  return out;
}

}  // namespace svmpc
