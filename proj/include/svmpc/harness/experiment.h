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

#ifndef SVMPC_HARNESS_EXPERIMENT_H_
#define SVMPC_HARNESS_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "svmpc/harness/config.h"
#include "svmpc/harness/dump.h"
#include "svmpc/harness/stats.h"

namespace svmpc {

// root XOR a per-trial mixing constant.
std::uint64_t trial_seed(std::uint64_t root, int trial);

// One MPC episode. Exceptions become a record with failed = true.
EpisodeRecord run_trial(const ExperimentConfig& cfg, int trial);

// One planner run, plus its outcome summarised as an episode record
// (success = feasible best path, cost = best trajectory cost).
PlanRecord run_plan_trial(const ExperimentConfig& cfg, int trial,
                          EpisodeRecord* as_episode);

struct ExperimentResult {
  SummaryStats stats;
  std::vector<EpisodeRecord> records;
  std::vector<PlanRecord> plans;
};

// Runs all trials on cfg.workers threads. When write_files is set, writes
// under cfg.output: config.txt, trials/ (per-trial dumps), episodes.jsonl
// (merged), plans.jsonl (planner only), summary.json and timing.json.
// Progress and the table row go to `log` when non-null.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files,
                                std::ostream* log);

// Recomputes the summary from an output directory's episodes.jsonl.
SummaryStats summarize_directory(const std::filesystem::path& dir,
                                 SummaryInfo* info);

int particle_count(const ExperimentConfig& cfg);

}  // namespace svmpc

#endif  // SVMPC_HARNESS_EXPERIMENT_H_
