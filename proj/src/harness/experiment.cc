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

#include "svmpc/harness/experiment.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>

#include "json.hpp"
#include "svmpc/baselines.h"
#include "svmpc/cost_map.h"
#include "svmpc/mpc.h"
#include "svmpc/parallel.h"
#include "svmpc/planar_nav.h"
#include "svmpc/trajopt.h"

namespace svmpc {
namespace {

constexpr std::uint64_t kTrialMix = 0x9E3779B97F4A7C15ULL;
constexpr double kFeasibleDensity = 0.01;
constexpr double kPlanGoalTolerance = 0.3;

std::string TrialFile(int trial) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "trial_%04d.jsonl", trial);
  return buf;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t root, int trial) {
  return root ^ (kTrialMix * static_cast<std::uint64_t>(trial + 1));
}

int particle_count(const ExperimentConfig& cfg) {
  switch (cfg.controller) {
    case ControllerKind::kSvmpc:
      return cfg.svmpc.particles;
    case ControllerKind::kSvTrajopt:
      return cfg.trajopt.particles;
    default:
      return 0;
  }
}

EpisodeRecord run_trial(const ExperimentConfig& cfg, int trial) {
  const std::uint64_t seed = trial_seed(cfg.seed, trial);
  try {
    const PlanarNavigation env(cfg.nav);
    EpisodeRecord rec;
    if (cfg.controller == ControllerKind::kSvmpc) {
      rec = run_episode(env, cfg.svmpc, seed, trial);
    } else {
      BaselineConfig b = cfg.baseline;
      b.kind = cfg.controller == ControllerKind::kCem ? BaselineKind::kCem
                                                      : BaselineKind::kMppi;
      rec = run_baseline_episode(env, b, seed, trial);
    }
    return rec;
  } catch (const std::exception& e) {
    EpisodeRecord rec;
    rec.controller = std::string(controller_name(cfg.controller));
    rec.trial = trial;
    rec.seed = seed;
    rec.failed = true;
    rec.error = e.what();
    return rec;
  }
}

PlanRecord run_plan_trial(const ExperimentConfig& cfg, int trial,
                          EpisodeRecord* as_episode) {
  PlanRecord plan;
  plan.trial = trial;
  plan.seed = trial_seed(cfg.seed, trial);
  EpisodeRecord ep;
  ep.controller = "svtrajopt";
  ep.trial = trial;
  ep.seed = plan.seed;
  try {
    const PlanningWorld world(cfg.planning);
    const Eigen::VectorXd x0 = cfg.planning.start;
    const TrajOptResult res = svtrajopt_run(world, x0, cfg.trajopt, plan.seed);
    plan.best = res.best;
    plan.svgd_iterations = res.svgd_iterations;
    plan.converged = res.converged;
    plan.log_posterior = res.log_posterior;
    plan.refinement_traces = res.refinement_traces;
    plan.particles = res.set.particles;
    plan.snapshots = res.snapshots;

    const ParamSequence& best = res.set.particles[res.best];
    const Eigen::MatrixXd path = rollout_deterministic(best, x0, world.dt());
    for (Eigen::Index k = 0; k < path.rows(); ++k) {
      plan.max_obstacle_density =
          std::max(plan.max_obstacle_density,
                   world.cost_map().density(path.row(k).transpose()));
    }
    plan.terminal_distance =
        (path.row(path.rows() - 1).transpose() - cfg.planning.goal).norm();
    plan.best_cost = trajectory_cost(world, best, x0);
    plan.feasible = plan.max_obstacle_density < kFeasibleDensity &&
                    plan.terminal_distance < kPlanGoalTolerance;

    ep.controls = best;
    ep.states = path;
    ep.total_cost = plan.best_cost;
    ep.crashed = plan.max_obstacle_density >= kFeasibleDensity;
    ep.success = plan.feasible;
  } catch (const std::exception& e) {
    ep.failed = true;
    ep.error = e.what();
  }
  if (as_episode != nullptr) *as_episode = std::move(ep);
  return plan;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files,
                                std::ostream* log) {
  cfg.Validate();
  const bool planner = cfg.controller == ControllerKind::kSvTrajopt;
  const bool full = cfg.dump == DumpLevel::kFull;
  const std::filesystem::path out_dir = cfg.output;
  const std::filesystem::path trial_dir = out_dir / "trials";
  if (write_files) {
    std::filesystem::create_directories(trial_dir);
    WriteText(out_dir / "config.txt", to_config_text(cfg));
  }
  DumpHeader episodes_header{"episodes", cfg.name,
                             std::string(controller_name(cfg.controller)),
                             particle_count(cfg)};
  DumpHeader plans_header = episodes_header;
  plans_header.kind = "plans";

  ExperimentResult result;
  result.records.resize(cfg.trials);
  if (planner) result.plans.resize(cfg.trials);
  std::vector<double> seconds(cfg.trials, 0.0);
  std::mutex log_mutex;

  parallel_for(cfg.trials, cfg.workers, [&](int trial) {
    const auto start = std::chrono::steady_clock::now();
    EpisodeRecord& rec = result.records[trial];
    if (planner) {
      result.plans[trial] = run_plan_trial(cfg, trial, &rec);
    } else {
      rec = run_trial(cfg, trial);
    }
    seconds[trial] = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    if (write_files) {
      write_episode_dump(trial_dir / TrialFile(trial), episodes_header, {rec},
                         full);
    }
    if (log != nullptr) {
      std::lock_guard<std::mutex> lock(log_mutex);
      char line[160];
      std::snprintf(line, sizeof(line),
                    "trial %d/%d: %s cost %.1f (%.2fs)%s%s\n", trial + 1,
                    cfg.trials,
                    rec.failed    ? "FAILED"
                    : rec.success ? "success"
                    : rec.crashed ? "crashed"
                                  : "timeout",
                    rec.total_cost, seconds[trial], rec.failed ? ": " : "",
                    rec.failed ? rec.error.c_str() : "");
      *log << line << std::flush;
    }
  });

  result.stats = aggregate(result.records);
  result.stats.wall_clock_seconds = seconds;

  if (write_files) {
    // Per-trial files are concatenated in trial order.
    std::vector<EpisodeRecord> merged;
    for (int t = 0; t < cfg.trials; ++t) {
      auto part = read_episode_dump(trial_dir / TrialFile(t));
      merged.insert(merged.end(), part.begin(), part.end());
    }
    write_episode_dump(out_dir / "episodes.jsonl", episodes_header, merged,
                       full);
    if (planner) write_plan_dump(out_dir / "plans.jsonl", plans_header,
                                 result.plans);
    const SummaryInfo info{cfg.name, std::string(controller_name(cfg.controller)),
                           particle_count(cfg)};
    WriteText(out_dir / "summary.json", serialize_summary(info, result.stats));
    WriteText(out_dir / "timing.json",
              nlohmann::json{{"wall_clock_seconds", seconds}}.dump(2) + "\n");
  }
  if (log != nullptr) {
    *log << table_header() << "\n"
         << table_row(std::string(controller_name(cfg.controller)),
                      particle_count(cfg), result.stats)
         << "\n";
  }
  return result;
}

SummaryStats summarize_directory(const std::filesystem::path& dir,
                                 SummaryInfo* info) {
  DumpHeader header;
  const auto records = read_episode_dump(dir / "episodes.jsonl", &header);
  if (info != nullptr) {
    *info = {header.experiment, header.controller, header.particles};
  }
  return aggregate(records);
}

}  // namespace svmpc
