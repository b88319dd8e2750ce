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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. --quick skips the navigation benchmark (1-4).

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "svmpc/baselines.h"
#include "svmpc/cost_map.h"
#include "svmpc/harness/experiment.h"
#include "svmpc/harness/presets.h"
#include "svmpc/model.h"
#include "svmpc/mpc.h"
#include "svmpc/planar_nav.h"
#include "svmpc/svgd.h"
#include "svmpc/trajopt.h"

namespace svmpc {
namespace {

int failures = 0;

void Report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string Fmt(const char* format, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

ParamSequence RandomSequence(std::mt19937_64& gen, int rows, int cols,
                             double scale) {
  std::normal_distribution<double> n(0.0, scale);
  ParamSequence p(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) p(r, c) = n(gen);
  return p;
}

double RelativeError(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

// Central differences of a scalar function of a matrix argument.
Eigen::MatrixXd FiniteDifference(
    const std::function<double(const Eigen::MatrixXd&)>& f,
    const Eigen::MatrixXd& x, double h) {
  Eigen::MatrixXd g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::MatrixXd up = x, down = x;
    up(i) += h;
    down(i) -= h;
    g(i) = (f(up) - f(down)) / (2 * h);
  }
  return g;
}

// --- 1-4: planar navigation benchmark --------------------------------------

void NavigationBenchmark() {
  std::map<std::string, SummaryStats> stats;
  for (const char* name : {"nav-svmpc-32", "nav-svmpc-6", "nav-mppi", "nav-cem"}) {
    const ExperimentConfig cfg = find_preset(name)->config;
    stats[name] = run_experiment(cfg, false, nullptr).stats;
    const SummaryStats& s = stats[name];
    std::printf("  %-13s success %5.1f%%  avg cost of success %s  (%d trials)\n",
                name, s.success_rate,
                s.avg_cost_success
                    ? Fmt("%.1fe3", *s.avg_cost_success / 1e3).c_str()
                    : "-",
                s.trials);
    std::fflush(stdout);
  }
  const SummaryStats& sv32 = stats["nav-svmpc-32"];
  const SummaryStats& sv6 = stats["nav-svmpc-6"];
  const SummaryStats& mppi = stats["nav-mppi"];
  const SummaryStats& cem = stats["nav-cem"];
  auto cost = [](const SummaryStats& s) {
    return s.avg_cost_success ? Fmt("%.1fe3", *s.avg_cost_success / 1e3)
                              : std::string("n/a");
  };

  Report(1, sv32.success_rate >= 85.0,
         Fmt("SV-MPC m=32 success %.0f%% (need >= 85%%)", sv32.success_rate));

  Report(2,
         sv32.success_rate >= mppi.success_rate + 10.0 &&
             sv32.success_rate >= cem.success_rate + 10.0,
         Fmt("success SV-MPC %.0f%% vs MPPI %.0f%% / CEM %.0f%% (need +10 "
             "points over both)",
             sv32.success_rate, mppi.success_rate, cem.success_rate));

  const bool cost3 = sv32.avg_cost_success && sv6.avg_cost_success &&
                     *sv32.avg_cost_success <= *sv6.avg_cost_success;
  Report(3, sv32.success_rate >= sv6.success_rate && cost3,
         Fmt("m=32 vs m=6: success %.0f%% vs %.0f%%", sv32.success_rate,
             sv6.success_rate) +
             ", avg cost of success " + cost(sv32) + " vs " + cost(sv6));

  const bool cost4 = sv32.avg_cost_success && mppi.avg_cost_success &&
                     *sv32.avg_cost_success <= *mppi.avg_cost_success;
  Report(4, cost4,
         "avg cost of success SV-MPC " + cost(sv32) + " vs MPPI " + cost(mppi));
}

// --- 5-6: single-particle reductions ----------------------------------------

void Reductions() {
  NavParams params;
  params.model_noise = false;
  PlanarNavigation env(params);
  std::mt19937_64 gen(3);
  MpcConfig cfg;
  cfg.particles = 1;
  cfg.horizon = 64;
  cfg.step_size = cfg.variance;
  double worst_mppi = 0.0, worst_cem = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const ParamSequence theta = RandomSequence(gen, 64, 2, 5.0);
    StreamKey key;
    key.root = 100 + trial;
    const RolloutBatch batch = sample_rollouts({theta, cfg.variance}, env,
                                               env.initial_state(), 32, key);
    const ParticleSet set = ParticleSet::Uniform({theta});
    const PriorSpec prior = uniform_prior(env.limits());

    cfg.likelihood = ExponentiatedUtility{1e-3};
    const ParamSequence sv_eu =
        svmpc_update(set, {batch}, cfg, prior, env.limits()).particles[0];
    worst_mppi = std::max(
        worst_mppi,
        (sv_eu - mppi_update(theta, batch, 1e-3)).cwiseAbs().maxCoeff());

    cfg.likelihood = ProbabilityOfLowCost{0.1};
    const ParamSequence sv_plc =
        svmpc_update(set, {batch}, cfg, prior, env.limits()).particles[0];
    worst_cem = std::max(
        worst_cem, (sv_plc - cem_update(theta, batch, 0.1)).cwiseAbs().maxCoeff());
  }
  Report(5, worst_mppi < 1e-10,
         Fmt("m=1 EU update vs MPPI, max |diff| %.2e over 10 batches", worst_mppi));
  Report(6, worst_cem < 1e-10,
         Fmt("m=1 PLC update vs CEM, max |diff| %.2e over 10 batches", worst_cem));
}

// --- 7-8: SVGD oracles ------------------------------------------------------

template <class Score>
ParticleSet RunSvgd(ParticleSet set, Score score, double eps, int iters) {
  const KernelSpec spec;
  for (int it = 0; it < iters; ++it) {
    std::vector<ParamSequence> g;
    for (const auto& p : set.particles) g.push_back(score(p));
    set = svgd_step(set, svgd_direction(set, g, spec), eps);
  }
  return set;
}

void SvgdOracles() {
  std::mt19937_64 gen(9);
  std::vector<ParamSequence> ps;
  for (int i = 0; i < 50; ++i) {
    ParamSequence p = RandomSequence(gen, 1, 2, 0.5);
    p.array() += 2.0;
    ps.push_back(p);
  }
  const ParticleSet g = RunSvgd(
      ParticleSet::Uniform(ps),
      [](const ParamSequence& p) { return ParamSequence(-p); }, 0.05, 500);
  Eigen::Vector2d mean = Eigen::Vector2d::Zero(), var = Eigen::Vector2d::Zero();
  for (const auto& p : g.particles) mean += p.row(0).transpose() / 50.0;
  for (const auto& p : g.particles) {
    var += (p.row(0).transpose() - mean).cwiseAbs2() / 49.0;
  }
  const bool ok7 = mean.cwiseAbs().maxCoeff() < 0.15 &&
                   (var.array() >= 0.7).all() && (var.array() <= 1.3).all();
  Report(7, ok7,
         Fmt("2-D normal: mean (%.3f, %.3f), variance (%.3f, %.3f)", mean(0),
             mean(1), var(0), var(1)));

  const double s2 = 0.25;
  auto bimodal = [&](const ParamSequence& p) {
    const double x = p(0, 0);
    const double a = std::exp(-(x - 3) * (x - 3) / (2 * s2));
    const double b = std::exp(-(x + 3) * (x + 3) / (2 * s2));
    const double den = a + b;
    const double score = den > 0 ? (-a * (x - 3) - b * (x + 3)) / (s2 * den)
                                 : (x > 0 ? -(x - 3) : -(x + 3)) / s2;
    return ParamSequence::Constant(1, 1, score);
  };
  std::vector<ParamSequence> qs;
  for (int i = 0; i < 50; ++i) qs.push_back(RandomSequence(gen, 1, 1, 2.0));
  const ParticleSet b = RunSvgd(ParticleSet::Uniform(qs), bimodal, 0.01, 2000);
  int right = 0;
  for (const auto& p : b.particles) right += p(0, 0) > 0;
  Report(8, right >= 10 && 50 - right >= 10,
         Fmt("+-3 mixture: %.0f particles right, %.0f left (need >= 10 each)",
             right, 50 - right));
}

// --- 9: gradient oracles ----------------------------------------------------

Eigen::MatrixXd DenseRandomWalkCovariance(const SmoothnessPrior& prior) {
  const int T = prior.horizon, d = prior.dim();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(T * d, T * d);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(T * d, T * d);
  for (int k = 0; k < T; ++k) {
    for (int j = 0; j < d; ++j) {
      D(k * d + j, k * d + j) = prior.step_variance(j);
      for (int l = 0; l <= k; ++l) L(k * d + j, l * d + j) = 1.0;
    }
  }
  return L * D * L.transpose();
}

void GradientOracles() {
  std::mt19937_64 gen(21);

  // Score of the Gaussian policy against the log density.
  double score_err = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    GaussianOpenLoopPolicy pol{RandomSequence(gen, 8, 2, 3.0), 4.0};
    const ParamSequence U = RandomSequence(gen, 8, 2, 3.0);
    const auto logpdf = [&](const Eigen::MatrixXd& mean) {
      return -(U - mean).squaredNorm() / (2 * pol.variance);
    };
    score_err = std::max(score_err, RelativeError(policy_score(pol, U),
                                                  FiniteDifference(logpdf, pol.mean, 1e-5)));
  }

  PlanningWorld world{PlanningParams{}};
  double map_err = 0.0;
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector2d x(u(gen), u(gen));
    const auto cost = [&](const Eigen::MatrixXd& p) {
      return world.plan_cost(Eigen::Vector2d(p(0), p(1)));
    };
    const Eigen::MatrixXd g = world.plan_cost_grad(x);
    const Eigen::MatrixXd fd = FiniteDifference(cost, x, 1e-5);
    if (fd.norm() > 1e-6) map_err = std::max(map_err, RelativeError(g, fd));
  }

  double traj_err = 0.0;
  const Eigen::Vector2d x0 = world.params().start;
  for (int trial = 0; trial < 20; ++trial) {
    const ParamSequence theta = RandomSequence(gen, 16, 2, 2.0);
    const auto cost = [&](const Eigen::MatrixXd& t) {
      return trajectory_cost(world, t, x0);
    };
    traj_err = std::max(traj_err, RelativeError(cost_gradient(world, theta, x0),
                                                FiniteDifference(cost, theta, 1e-5)));
  }

  SmoothnessPrior prior;
  prior.horizon = 16;
  prior.step_variance = Eigen::Vector2d(0.05, 0.3);
  const Eigen::MatrixXd precision = DenseRandomWalkCovariance(prior).inverse();
  double dense_err = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const ParamSequence theta = RandomSequence(gen, 16, 2, 1.0);
    Eigen::VectorXd v(32), banded(32);
    const ParamSequence g = smoothness_log_grad(prior, theta);
    for (int k = 0; k < 16; ++k) {
      for (int j = 0; j < 2; ++j) {
        v(2 * k + j) = theta(k, j);
        banded(2 * k + j) = g(k, j);
      }
    }
    dense_err = std::max(dense_err,
                         (banded + precision * v).cwiseAbs().maxCoeff());
  }

  const bool ok = score_err <= 1e-4 && map_err <= 1e-4 && traj_err <= 1e-4 &&
                  dense_err <= 1e-10;
  Report(9, ok,
         Fmt("rel. FD error: score %.1e, cost map %.1e, trajectory %.1e; ",
             score_err, map_err, traj_err) +
             Fmt("banded vs dense precision %.1e", dense_err));
}

// --- 10: determinism --------------------------------------------------------

void Determinism() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"nav-svmpc-32", "nav-mppi", "nav-cem", "plan-svtrajopt"}) {
    ExperimentConfig cfg = find_preset(name)->config;
    cfg.trials = 4;
    cfg.seed = 5;
    cfg.dump = DumpLevel::kFull;
    cfg.svmpc.episode_length = 40;
    cfg.baseline.episode_length = 40;
    cfg.trajopt.max_iterations = 100;
    cfg.workers = 1;
    const ExperimentResult serial = run_experiment(cfg, false, nullptr);
    const ExperimentResult again = run_experiment(cfg, false, nullptr);
    cfg.workers = 4;
    cfg.svmpc.workers = 3;
    cfg.trajopt.workers = 3;
    const ExperimentResult parallel = run_experiment(cfg, false, nullptr);
    bool same = serial.stats == again.stats && serial.stats == parallel.stats;
    for (int t = 0; t < cfg.trials; ++t) {
      same = same && serial.records[t] == again.records[t] &&
             serial.records[t] == parallel.records[t];
      if (!serial.plans.empty()) {
        same = same && serial.plans[t] == again.plans[t] &&
               serial.plans[t] == parallel.plans[t];
      }
    }
    ok = ok && same;
    detail += std::string(name) + (same ? " identical; " : " DIFFERS; ");
  }
  Report(10, ok, detail + "serial, repeated and parallel runs");
}

// --- 11: SV-TrajOpt feasibility ---------------------------------------------

void Planner() {
  const ExperimentConfig cfg = find_preset("plan-svtrajopt")->config;
  EpisodeRecord as_episode;
  const PlanRecord plan = run_plan_trial(cfg, 0, &as_episode);
  bool monotone = true;
  for (const auto& trace : plan.refinement_traces) {
    for (std::size_t k = 1; k < trace.size(); ++k) {
      monotone = monotone && trace[k] >= trace[k - 1];
    }
  }
  const bool refined =
      !plan.refinement_traces.empty() &&
      static_cast<int>(plan.refinement_traces[0].size()) ==
          cfg.trajopt.refinement_iterations + 1 &&
      cfg.trajopt.refinement_iterations == 50;
  Report(11,
         plan.max_obstacle_density < 0.01 && plan.terminal_distance < 0.3 &&
             monotone && refined,
         Fmt("best path max p_obs %.2e, terminal distance %.3f, %.0f SVGD "
             "iterations, ",
             plan.max_obstacle_density, plan.terminal_distance,
             plan.svgd_iterations) +
             (monotone ? "refinement monotone" : "refinement NOT monotone"));
}

}  // namespace
}  // namespace svmpc

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  try {
    if (quick) {
      std::printf("criteria 1-4 skipped (--quick)\n");
    } else {
      svmpc::NavigationBenchmark();
    }
    svmpc::Reductions();
    svmpc::SvgdOracles();
    svmpc::GradientOracles();
    svmpc::Determinism();
    svmpc::Planner();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criteria failed\n", svmpc::failures);
  return svmpc::failures == 0 ? 0 : 1;
}
