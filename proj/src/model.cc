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

#include "svmpc/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace svmpc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void CheckCosts(const Eigen::VectorXd& costs, const char* who) {
  if (costs.size() < 1) {
    throw std::invalid_argument(std::string(who) + ": empty batch");
  }
  if (!costs.allFinite()) {
    throw std::invalid_argument(std::string(who) + ": non-finite cost");
  }
}

bool InsideBox(const UniformPrior& prior, const ParamSequence& theta) {
  if (prior.lower.size() != theta.cols() || prior.upper.size() != theta.cols()) {
    throw std::invalid_argument("uniform prior: bound dimension mismatch");
  }
  for (Eigen::Index h = 0; h < theta.rows(); ++h) {
    for (Eigen::Index j = 0; j < theta.cols(); ++j) {
      if (theta(h, j) < prior.lower(j) || theta(h, j) > prior.upper(j)) {
        return false;
      }
    }
  }
  return true;
}

// log w_i - |theta - c_i|^2 / (2 v) for every mixture component.
Eigen::VectorXd MixtureLogTerms(const ShiftedGaussianMixture& prior,
                                const ParamSequence& theta) {
  if (prior.centers.empty() || prior.centers.size() != prior.weights.size()) {
    throw std::invalid_argument(
        "mixture prior: needs matching, non-empty centers and weights");
  }
  if (!(prior.component_variance > 0.0)) {
    throw std::invalid_argument("mixture prior: variance must be > 0");
  }
  Eigen::VectorXd terms(static_cast<Eigen::Index>(prior.centers.size()));
  for (std::size_t i = 0; i < prior.centers.size(); ++i) {
    const double w = prior.weights[i];
    terms(static_cast<Eigen::Index>(i)) =
        (w > 0.0 ? std::log(w) : kNegInf) -
        (theta - prior.centers[i]).squaredNorm() /
            (2.0 * prior.component_variance);
  }
  return terms;
}

}  // namespace

void ValidateLikelihood(const LikelihoodSpec& spec) {
  std::visit(Overloaded{
                 [](const ExponentiatedUtility& eu) {
                   if (!(eu.alpha > 0.0) || !std::isfinite(eu.alpha)) {
                     throw std::invalid_argument(
                         "exponentiated utility: alpha must be > 0");
                   }
                 },
                 [](const ProbabilityOfLowCost& plc) {
                   if (!(plc.elite_fraction > 0.0 &&
                         plc.elite_fraction <= 1.0)) {
                     throw std::invalid_argument(
                         "probability of low cost: elite fraction must be in "
                         "(0, 1]");
                   }
                 },
             },
             spec);
}

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() == 0) return kNegInf;
  const double mx = v.maxCoeff();
  if (mx == kNegInf) return kNegInf;
  return mx + std::log((v.array() - mx).exp().sum());
}

RolloutBatch sample_rollouts(const GaussianOpenLoopPolicy& policy,
                             const Environment& env, const State& x0, int N,
                             const StreamKey& key) {
  if (N < 1) throw std::invalid_argument("sample_rollouts: N must be >= 1");
  if (!(policy.variance > 0.0)) {
    throw std::invalid_argument("sample_rollouts: variance must be > 0");
  }
  const auto horizon = policy.mean.rows();
  const auto dim = policy.mean.cols();
  if (dim != env.control_dim()) {
    throw std::invalid_argument("sample_rollouts: control dimension mismatch");
  }
  const double sigma = std::sqrt(policy.variance);
  RolloutBatch batch;
  batch.controls.resize(N);
  batch.states.resize(N);
  batch.costs.resize(N);
  for (int s = 0; s < N; ++s) {
    RngStream rng = key.Stream(static_cast<std::uint64_t>(s));
    ParamSequence U(horizon, dim);
    for (Eigen::Index h = 0; h < horizon; ++h) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        U(h, j) = policy.mean(h, j) + sigma * rng.Normal();
      }
    }
    env.clamp_controls(U);
    batch.costs(s) =
        env.rollout(x0, U, DynamicsMode::kModel, &rng, &batch.states[s]);
    batch.controls[s] = std::move(U);
  }
  return batch;
}

ParamSequence policy_score(const GaussianOpenLoopPolicy& policy,
                           const ParamSequence& U) {
  if (U.rows() != policy.mean.rows() || U.cols() != policy.mean.cols()) {
    throw std::invalid_argument("policy_score: shape mismatch");
  }
  return (U - policy.mean) / policy.variance;
}

std::vector<int> elite_indices(const Eigen::VectorXd& costs, double fraction) {
  const int n = static_cast<int>(costs.size());
  // 1e-9 absorbs products like 0.3 * 10 = 3.0000000000000004
  int k = static_cast<int>(std::ceil(fraction * n - 1e-9));
  k = std::clamp(k, 1, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return costs(a) < costs(b); });
  order.resize(k);
  return order;
}

Eigen::VectorXd sample_weights(const Eigen::VectorXd& costs,
                               const LikelihoodSpec& spec) {
  CheckCosts(costs, "sample_weights");
  ValidateLikelihood(spec);
  return std::visit(
      Overloaded{
          [&](const ExponentiatedUtility& eu) -> Eigen::VectorXd {
            const double baseline = costs.minCoeff();
            Eigen::VectorXd w =
                (-eu.alpha * (costs.array() - baseline)).exp().matrix();
            return w / w.sum();
          },
          [&](const ProbabilityOfLowCost& plc) -> Eigen::VectorXd {
            const std::vector<int> elite =
                elite_indices(costs, plc.elite_fraction);
            Eigen::VectorXd w = Eigen::VectorXd::Zero(costs.size());
            const double share = 1.0 / static_cast<double>(elite.size());
            for (int s : elite) w(s) = share;
            return w;
          },
      },
      spec);
}

ParamSequence likelihood_grad(const GaussianOpenLoopPolicy& policy,
                              const RolloutBatch& batch,
                              const LikelihoodSpec& spec) {
  const Eigen::VectorXd w = sample_weights(batch.costs, spec);
  ParamSequence grad = ParamSequence::Zero(policy.mean.rows(),
                                           policy.mean.cols());
  for (int s = 0; s < batch.size(); ++s) {
    if (w(s) == 0.0) continue;
    grad += w(s) * policy_score(policy, batch.controls[s]);
  }
  return grad;
}

double log_likelihood_estimate(const RolloutBatch& batch,
                               const LikelihoodSpec& spec) {
  CheckCosts(batch.costs, "log_likelihood_estimate");
  ValidateLikelihood(spec);
  const auto n = static_cast<double>(batch.costs.size());
  return std::visit(
      Overloaded{
          [&](const ExponentiatedUtility& eu) {
            const Eigen::VectorXd v = -eu.alpha * batch.costs;
            const double mx = v.maxCoeff();
            return mx + std::log((v.array() - mx).exp().sum() / n);
          },
          [&](const ProbabilityOfLowCost& plc) {
            const std::vector<int> elite =
                elite_indices(batch.costs, plc.elite_fraction);
            const double threshold = batch.costs(elite.back());
            const auto passing = (batch.costs.array() <= threshold).count();
            return std::log(static_cast<double>(passing) / n);
          },
      },
      spec);
}

double prior_log_density(const PriorSpec& prior, const ParamSequence& theta) {
  return std::visit(
      Overloaded{
          [&](const UniformPrior& u) {
            return InsideBox(u, theta) ? 0.0 : kNegInf;
          },
          [&](const ShiftedGaussianMixture& mix) {
            const double dim = static_cast<double>(theta.size());
            return log_sum_exp(MixtureLogTerms(mix, theta)) -
                   0.5 * dim *
                       std::log(2.0 * std::numbers::pi *
                                mix.component_variance);
          },
      },
      prior);
}

ParamSequence prior_log_grad(const PriorSpec& prior,
                             const ParamSequence& theta) {
  return std::visit(
      Overloaded{
          [&](const UniformPrior& u) -> ParamSequence {
            if (!InsideBox(u, theta)) {
              throw std::domain_error(
                  "prior_log_grad: parameters outside the uniform prior "
                  "support");
            }
            return ParamSequence::Zero(theta.rows(), theta.cols());
          },
          [&](const ShiftedGaussianMixture& mix) -> ParamSequence {
            const Eigen::VectorXd terms = MixtureLogTerms(mix, theta);
            const double norm = log_sum_exp(terms);
            ParamSequence grad = ParamSequence::Zero(theta.rows(), theta.cols());
            for (std::size_t i = 0; i < mix.centers.size(); ++i) {
              const double r =
                  std::exp(terms(static_cast<Eigen::Index>(i)) - norm);
              if (r == 0.0) continue;
              grad -= r * (theta - mix.centers[i]) / mix.component_variance;
            }
            return grad;
          },
      },
      prior);
}

PosteriorWeights posterior_weights(const ParticleSet& set,
                                   const std::vector<double>& log_likelihoods,
                                   const PriorSpec& prior) {
  const int m = set.size();
  if (m < 1) throw std::invalid_argument("posterior_weights: empty set");
  if (static_cast<int>(log_likelihoods.size()) != m) {
    throw std::invalid_argument("posterior_weights: likelihood count mismatch");
  }
  PosteriorWeights out;
  Eigen::VectorXd log_w(m);
  for (int i = 0; i < m; ++i) {
    log_w(i) = log_likelihoods[i] + prior_log_density(prior, set.particles[i]);
    if (std::isnan(log_w(i))) log_w(i) = kNegInf;
  }
  const double norm = log_sum_exp(log_w);
  if (norm == kNegInf || !std::isfinite(norm)) {
    out.weights.assign(m, 1.0 / m);
    out.fallback = true;
    return out;
  }
  out.weights.resize(m);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    out.weights[i] = std::exp(log_w(i) - norm);
    total += out.weights[i];
  }
  for (double& w : out.weights) w /= total;
  return out;
}

}  // namespace svmpc
