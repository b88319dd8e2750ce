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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "svmpc/planar_nav.h"

namespace svmpc {
namespace {

ParamSequence RandomSequence(std::mt19937_64& gen, int rows, int cols,
                             double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  ParamSequence p(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) p(r, c) = n(gen);
  return p;
}

Eigen::VectorXd Costs(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Batch with hand-picked controls and costs; states are not needed by the
// estimators.
RolloutBatch MakeBatch(const std::vector<ParamSequence>& controls,
                       const Eigen::VectorXd& costs) {
  RolloutBatch b;
  b.controls = controls;
  b.states.assign(controls.size(), Eigen::MatrixXd());
  b.costs = costs;
  return b;
}

double LogGaussian(const ParamSequence& U, const ParamSequence& theta,
                   double var) {
  const double n = static_cast<double>(U.size());
  return -0.5 * (U - theta).squaredNorm() / var -
         0.5 * n * std::log(2 * std::numbers::pi * var);
}

TEST(SampleRollouts, DegeneratePolicyReproducesTheMean) {
  PlanarNavigation env(NavParams{});
  std::mt19937_64 gen(1);
  const GaussianOpenLoopPolicy pi{RandomSequence(gen, 8, 2, 3.0), 1e-12};
  StreamKey key;
  const RolloutBatch b = sample_rollouts(pi, env, env.initial_state(), 4, key);
  for (const auto& U : b.controls)
    EXPECT_LT((U - pi.mean).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(SampleRollouts, SeededBatchIsRepeatable) {
  PlanarNavigation env(NavParams{});
  const GaussianOpenLoopPolicy pi{ParamSequence::Zero(16, 2), 100.0};
  StreamKey key;
  key.root = 99;
  const RolloutBatch a = sample_rollouts(pi, env, env.initial_state(), 1, key);
  const RolloutBatch b = sample_rollouts(pi, env, env.initial_state(), 1, key);
  EXPECT_EQ(a.controls[0], b.controls[0]);
  EXPECT_EQ(a.states[0], b.states[0]);
  EXPECT_EQ(a.costs(0), b.costs(0));
}

TEST(SampleRollouts, ControlsRespectLimitsAndCostsMatchRollout) {
  NavParams params;
  params.model_noise = false;
  PlanarNavigation env(params);
  const GaussianOpenLoopPolicy pi{ParamSequence::Zero(32, 2), 1e4};
  StreamKey key;
  const State x0 = env.initial_state();
  const RolloutBatch b = sample_rollouts(pi, env, x0, 16, key);
  ASSERT_EQ(b.size(), 16);
  for (int s = 0; s < b.size(); ++s) {
    EXPECT_LE(b.controls[s].cwiseAbs().maxCoeff(), 50.0);
    EXPECT_EQ(b.states[s].rows(), 33);
    EXPECT_EQ(b.costs(s), env.rollout(x0, b.controls[s],
                                      DynamicsMode::kDeterministic, nullptr,
                                      nullptr));
  }
}

TEST(SampleRollouts, RejectsBadArguments) {
  PlanarNavigation env(NavParams{});
  StreamKey key;
  EXPECT_THROW(sample_rollouts({ParamSequence::Zero(4, 2), 1.0}, env,
                               env.initial_state(), 0, key),
               std::invalid_argument);
  EXPECT_THROW(sample_rollouts({ParamSequence::Zero(4, 2), 0.0}, env,
                               env.initial_state(), 1, key),
               std::invalid_argument);
  EXPECT_THROW(sample_rollouts({ParamSequence::Zero(4, 3), 1.0}, env,
                               env.initial_state(), 1, key),
               std::invalid_argument);
}

TEST(PolicyScore, ZeroAtTheMeanAndUnitCase) {
  const ParamSequence theta = ParamSequence::Constant(3, 2, 0.7);
  EXPECT_EQ(policy_score({theta, 2.0}, theta), ParamSequence::Zero(3, 2));
  const ParamSequence U = theta.array() + 1.0;
  EXPECT_LT((policy_score({theta, 1.0}, U) - ParamSequence::Ones(3, 2))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(PolicyScore, MatchesFiniteDifferencesOfTheLogDensity) {
  std::mt19937_64 gen(2);
  const double step = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const ParamSequence theta = RandomSequence(gen, 4, 2);
    const ParamSequence U = RandomSequence(gen, 4, 2, 2.0);
    const double var = 0.5 + trial * 0.1;
    const ParamSequence score = policy_score({theta, var}, U);
    for (int i = 0; i < theta.size(); ++i) {
      ParamSequence tp = theta, tm = theta;
      tp(i) += step;
      tm(i) -= step;
      const double fd =
          (LogGaussian(U, tp, var) - LogGaussian(U, tm, var)) / (2 * step);
      EXPECT_LE(std::abs(fd - score(i)), 1e-6 * std::max(std::abs(fd), 1.0));
    }
  }
}

TEST(PolicyScore, RejectsShapeMismatch) {
  EXPECT_THROW(policy_score({ParamSequence::Zero(2, 2), 1.0},
                            ParamSequence::Zero(3, 2)),
               std::invalid_argument);
}

TEST(SampleWeights, EqualCostsAreUniform) {
  for (LikelihoodSpec spec :
       {LikelihoodSpec{ExponentiatedUtility{2.0}},
        LikelihoodSpec{ProbabilityOfLowCost{1.0}}}) {
    const Eigen::VectorXd w = sample_weights(Costs({5, 5, 5, 5}), spec);
    for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(w(i), 0.25);
  }
}

TEST(SampleWeights, EliteFractionPicksTheSingleBest) {
  const Eigen::VectorXd w = sample_weights(
      Costs({4, 9, 1, 7, 3, 8, 2, 6, 5, 10}), ProbabilityOfLowCost{0.1});
  for (int i = 0; i < 10; ++i) EXPECT_EQ(w(i), i == 2 ? 1.0 : 0.0);
}

TEST(SampleWeights, SoftmaxEvaluation) {
  const Eigen::VectorXd w =
      sample_weights(Costs({0, 100}), ExponentiatedUtility{1.0});
  EXPECT_NEAR(w(0), 1.0, 1e-15);
  EXPECT_NEAR(w(1), std::exp(-100.0) / (1 + std::exp(-100.0)), 1e-57);
  EXPECT_NEAR(w(1), 3.7e-44, 0.05e-44);
}

TEST(SampleWeights, ShiftInvariantExactly) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1000);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd c(8);
    for (int i = 0; i < 8; ++i) c(i) = std::round(u(gen));
    // integer-valued shifts keep the min-subtracted costs bit-identical
    const double shift = std::round(u(gen));
    const ExponentiatedUtility eu{0.01};
    EXPECT_EQ(sample_weights(c, eu),
              sample_weights((c.array() + shift).matrix(), eu));
  }
}

TEST(SampleWeights, NormalizedAndNonNegative) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0, 5000);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd c(16);
    for (int i = 0; i < 16; ++i) c(i) = u(gen);
    for (LikelihoodSpec spec :
         {LikelihoodSpec{ExponentiatedUtility{1e-3 * (trial + 1)}},
          LikelihoodSpec{ProbabilityOfLowCost{0.05 * (trial % 20 + 1)}}}) {
      const Eigen::VectorXd w = sample_weights(c, spec);
      EXPECT_NEAR(w.sum(), 1.0, 1e-12);
      EXPECT_GE(w.minCoeff(), 0.0);
    }
  }
}

TEST(SampleWeights, RejectsInvalidInput) {
  EXPECT_THROW(sample_weights(Costs({1, 2}), ExponentiatedUtility{0.0}),
               std::invalid_argument);
  EXPECT_THROW(sample_weights(Costs({1, 2}), ExponentiatedUtility{-1.0}),
               std::invalid_argument);
  EXPECT_THROW(sample_weights(Costs({1, 2}), ProbabilityOfLowCost{0.0}),
               std::invalid_argument);
  EXPECT_THROW(sample_weights(Costs({1, 2}), ProbabilityOfLowCost{1.5}),
               std::invalid_argument);
  EXPECT_THROW(sample_weights(Costs({1, NAN}), ExponentiatedUtility{1.0}),
               std::invalid_argument);
  EXPECT_THROW(sample_weights(Eigen::VectorXd(0), ExponentiatedUtility{1.0}),
               std::invalid_argument);
}

TEST(EliteIndices, CountAndTieBreaking) {
  EXPECT_EQ(elite_indices(Costs({3, 1, 1, 1, 5}), 0.4),
            (std::vector<int>{1, 2}));
  EXPECT_EQ(elite_indices(Costs({2, 2, 2}), 1.0), (std::vector<int>{0, 1, 2}));
  // 0.3 * 10 must not round up to 4
  EXPECT_EQ(elite_indices(Costs({9, 8, 7, 6, 5, 4, 3, 2, 1, 0}), 0.3).size(),
            3u);
}

TEST(LikelihoodGrad, SingleSampleIsItsScore) {
  std::mt19937_64 gen(5);
  const GaussianOpenLoopPolicy pi{RandomSequence(gen, 3, 2), 4.0};
  const ParamSequence U = RandomSequence(gen, 3, 2);
  const RolloutBatch b = MakeBatch({U}, Costs({12.0}));
  EXPECT_EQ(likelihood_grad(pi, b, ExponentiatedUtility{1.0}),
            policy_score(pi, U));
}

TEST(LikelihoodGrad, EqualCostsAndTinyAlphaGiveTheMeanScore) {
  std::mt19937_64 gen(6);
  const GaussianOpenLoopPolicy pi{RandomSequence(gen, 3, 2), 2.0};
  std::vector<ParamSequence> U;
  ParamSequence mean = ParamSequence::Zero(3, 2);
  for (int s = 0; s < 6; ++s) {
    U.push_back(RandomSequence(gen, 3, 2, 3.0));
    mean += policy_score(pi, U.back()) / 6.0;
  }
  const RolloutBatch equal = MakeBatch(U, Eigen::VectorXd::Constant(6, 4.0));
  EXPECT_LT((likelihood_grad(pi, equal, ExponentiatedUtility{1.0}) - mean)
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
  Eigen::VectorXd c(6);
  c << 1, 200, 35, 7, 1000, 12;
  const RolloutBatch spread = MakeBatch(U, c);
  EXPECT_LT((likelihood_grad(pi, spread, ExponentiatedUtility{1e-12}) - mean)
                .cwiseAbs()
                .maxCoeff(),
            1e-8);
}

TEST(LikelihoodGrad, InsideConvexHullOfScores) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0, 100);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianOpenLoopPolicy pi{RandomSequence(gen, 4, 2), 1.5};
    std::vector<ParamSequence> U;
    Eigen::VectorXd c(10);
    for (int s = 0; s < 10; ++s) {
      U.push_back(RandomSequence(gen, 4, 2, 2.0));
      c(s) = u(gen);
    }
    const RolloutBatch b = MakeBatch(U, c);
    for (LikelihoodSpec spec : {LikelihoodSpec{ExponentiatedUtility{0.05}},
                                LikelihoodSpec{ProbabilityOfLowCost{0.3}}}) {
      const ParamSequence g = likelihood_grad(pi, b, spec);
      ParamSequence lo = policy_score(pi, U[0]), hi = lo;
      for (const auto& Us : U) {
        lo = lo.cwiseMin(policy_score(pi, Us));
        hi = hi.cwiseMax(policy_score(pi, Us));
      }
      EXPECT_TRUE(((g.array() >= lo.array() - 1e-12) &&
                   (g.array() <= hi.array() + 1e-12))
                      .all());
    }
  }
}

// For C(U) = a/2 |U|^2 and U = theta + sigma z the expectation has the closed
// form log E[exp(-alpha C)] = const - alpha a theta^2 / (2 (1 + alpha a s2))
// per entry, so the gradient is -alpha a theta / (1 + alpha a s2).
TEST(LikelihoodGrad, QuadraticCostMatchesClosedFormGradient) {
  const double alpha = 1.0, a = 1.0, s2 = 1.0;
  ParamSequence theta(2, 1);
  theta << 1.0, -0.5;
  const GaussianOpenLoopPolicy pi{theta, s2};
  std::mt19937_64 gen(8);
  std::normal_distribution<double> n(0, 1);
  const int N = 10000;
  std::vector<ParamSequence> U(N);
  Eigen::VectorXd c(N);
  for (int s = 0; s < N; ++s) {
    U[s] = theta;
    for (int i = 0; i < theta.size(); ++i) U[s](i) += std::sqrt(s2) * n(gen);
    c(s) = 0.5 * a * U[s].squaredNorm();
  }
  const ParamSequence g =
      likelihood_grad(pi, MakeBatch(U, c), ExponentiatedUtility{alpha});
  const ParamSequence exact = -alpha * a * theta / (1 + alpha * a * s2);
  for (int i = 0; i < theta.size(); ++i)
    EXPECT_LT(std::abs(g(i) - exact(i)), 0.05 * std::abs(exact(i)));
}

TEST(LogLikelihoodEstimate, Examples) {
  const RolloutBatch constant =
      MakeBatch(std::vector<ParamSequence>(3, ParamSequence::Zero(1, 1)),
                Costs({7, 7, 7}));
  EXPECT_NEAR(log_likelihood_estimate(constant, ExponentiatedUtility{0.5}),
              -3.5, 1e-14);
  EXPECT_EQ(log_likelihood_estimate(constant, ProbabilityOfLowCost{1.0}), 0.0);
  const RolloutBatch two = MakeBatch(
      std::vector<ParamSequence>(2, ParamSequence::Zero(1, 1)),
      Costs({0, std::log(3.0)}));
  EXPECT_NEAR(log_likelihood_estimate(two, ExponentiatedUtility{1.0}),
              std::log(2.0 / 3.0), 1e-15);
}

TEST(LogLikelihoodEstimate, CostTranslationAddsMinusAlphaShift) {
  Eigen::VectorXd c(4);
  c << 1, 2, 4, 8;
  const std::vector<ParamSequence> U(4, ParamSequence::Zero(1, 1));
  const double alpha = 0.5, shift = 16.0;
  const double base =
      log_likelihood_estimate(MakeBatch(U, c), ExponentiatedUtility{alpha});
  const double moved = log_likelihood_estimate(
      MakeBatch(U, (c.array() + shift).matrix()), ExponentiatedUtility{alpha});
  EXPECT_EQ(moved, base - alpha * shift);
}

TEST(LogLikelihoodEstimate, PlcCountsPassingSamples) {
  const std::vector<ParamSequence> U(4, ParamSequence::Zero(1, 1));
  // threshold is the second smallest cost (3); three samples pass
  EXPECT_NEAR(log_likelihood_estimate(MakeBatch(U, Costs({3, 1, 3, 9})),
                                      ProbabilityOfLowCost{0.5}),
              std::log(0.75), 1e-15);
}

UniformPrior Box(double lo, double hi, int dim) {
  return {Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi)};
}

TEST(PosteriorWeights, Examples) {
  const ParticleSet one = ParticleSet::Uniform({ParamSequence::Zero(2, 1)});
  EXPECT_EQ(posterior_weights(one, {-3.0}, Box(-1, 1, 1)).weights,
            std::vector<double>{1.0});
  const ParticleSet two = ParticleSet::Uniform(
      {ParamSequence::Zero(2, 1), ParamSequence::Constant(2, 1, 0.5)});
  const auto eq = posterior_weights(two, {-2.0, -2.0}, Box(-1, 1, 1));
  EXPECT_DOUBLE_EQ(eq.weights[0], 0.5);
  EXPECT_DOUBLE_EQ(eq.weights[1], 0.5);
  const auto w = posterior_weights(two, {0.0, -std::log(3.0)}, Box(-1, 1, 1));
  EXPECT_NEAR(w.weights[0], 0.75, 1e-15);
  EXPECT_NEAR(w.weights[1], 0.25, 1e-15);
  EXPECT_FALSE(w.fallback);
}

TEST(PosteriorWeights, OutsideUniformSupportGetsZeroAndAllOutsideFallsBack) {
  const ParticleSet two = ParticleSet::Uniform(
      {ParamSequence::Zero(1, 1), ParamSequence::Constant(1, 1, 2.0)});
  const auto w = posterior_weights(two, {-5.0, 0.0}, Box(-1, 1, 1));
  EXPECT_EQ(w.weights[0], 1.0);
  EXPECT_EQ(w.weights[1], 0.0);
  EXPECT_FALSE(w.fallback);
  const auto f = posterior_weights(two, {0.0, 0.0}, Box(5, 6, 1));
  EXPECT_TRUE(f.fallback);
  EXPECT_EQ(f.weights, (std::vector<double>{0.5, 0.5}));
}

TEST(PosteriorWeights, MixturePriorContributesItsDensity) {
  ShiftedGaussianMixture mix;
  mix.component_variance = 1.0;
  mix.centers = {ParamSequence::Zero(1, 1)};
  mix.weights = {1.0};
  const ParticleSet two = ParticleSet::Uniform(
      {ParamSequence::Zero(1, 1), ParamSequence::Constant(1, 1, 1.0)});
  const auto w = posterior_weights(two, {0.0, 0.0}, mix);
  // ratio exp(-1/2)
  EXPECT_NEAR(w.weights[1] / w.weights[0], std::exp(-0.5), 1e-14);
}

TEST(PriorLogGrad, UniformIsZeroInsideAndThrowsOutside) {
  EXPECT_EQ(prior_log_grad(Box(-1, 1, 2), ParamSequence::Constant(3, 2, 0.2)),
            ParamSequence::Zero(3, 2));
  EXPECT_THROW(prior_log_grad(Box(-1, 1, 2), ParamSequence::Constant(3, 2, 1.5)),
               std::domain_error);
}

TEST(PriorLogGrad, MixtureExamples) {
  ShiftedGaussianMixture mix;
  mix.component_variance = 2.0;
  mix.centers = {ParamSequence::Zero(1, 1)};
  mix.weights = {1.0};
  EXPECT_EQ(prior_log_grad(mix, ParamSequence::Zero(1, 1))(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(prior_log_grad(mix, ParamSequence::Ones(1, 1))(0, 0), -0.5);
  ShiftedGaussianMixture empty;
  EXPECT_THROW(prior_log_grad(empty, ParamSequence::Zero(1, 1)),
               std::invalid_argument);
}

TEST(PriorLogGrad, MixtureMatchesFiniteDifferencesOfItsDensity) {
  std::mt19937_64 gen(9);
  ShiftedGaussianMixture mix;
  mix.component_variance = 0.8;
  for (int i = 0; i < 3; ++i) mix.centers.push_back(RandomSequence(gen, 2, 2));
  mix.weights = {0.2, 0.5, 0.3};
  const double step = 1e-5;
  for (int trial = 0; trial < 10; ++trial) {
    const ParamSequence theta = RandomSequence(gen, 2, 2);
    const ParamSequence g = prior_log_grad(mix, theta);
    for (int i = 0; i < theta.size(); ++i) {
      ParamSequence tp = theta, tm = theta;
      tp(i) += step;
      tm(i) -= step;
      const double fd =
          (prior_log_density(mix, tp) - prior_log_density(mix, tm)) /
          (2 * step);
      EXPECT_LE(std::abs(fd - g(i)), 1e-6 * std::max(std::abs(fd), 1.0));
    }
  }
}

TEST(LogSumExp, StableAndDegenerate) {
  Eigen::VectorXd v(2);
  v << 1000.0, 1000.0;
  EXPECT_NEAR(log_sum_exp(v), 1000.0 + std::log(2.0), 1e-12);
  EXPECT_EQ(log_sum_exp(Eigen::VectorXd(0)), -INFINITY);
  v << -INFINITY, -INFINITY;
  EXPECT_EQ(log_sum_exp(v), -INFINITY);
}

}  // namespace
}  // namespace svmpc
