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

#ifndef SVMPC_HARNESS_DUMP_H_
#define SVMPC_HARNESS_DUMP_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "svmpc/episode_record.h"
#include "svmpc/harness/stats.h"

namespace svmpc {

// Dumps are JSON lines. Line 1 is a header
//   {"schema":"svmpc-dump","version":1,"kind":...,"experiment":...}
// and each following line is one record. Doubles are written in shortest
// round-trip form; non-finite values are the strings "nan", "inf", "-inf".
inline constexpr const char* kDumpSchema = "svmpc-dump";
inline constexpr const char* kSummarySchema = "svmpc-summary";
inline constexpr int kDumpVersion = 1;

// Planner output for one trial.
struct PlanRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  int best = 0;
  int svgd_iterations = 0;
  bool converged = false;
  bool feasible = false;
  double best_cost = 0.0;
  double max_obstacle_density = 0.0;  // along the best path
  double terminal_distance = 0.0;
  std::vector<double> log_posterior;
  std::vector<std::vector<double>> refinement_traces;
  std::vector<Eigen::MatrixXd> particles;  // final control sequences
  std::vector<ParticleSnapshot> snapshots;

  bool operator==(const PlanRecord& other) const;
};

struct DumpHeader {
  std::string kind;  // "episodes" or "plans"
  std::string experiment;
  std::string controller;
  int particles = 0;
};

// Without trajectories only scalar outcome fields are written.
std::string serialize_episode(const EpisodeRecord& record,
                              bool trajectories = true);
EpisodeRecord parse_episode(const std::string& line);

std::string serialize_plan(const PlanRecord& record);
PlanRecord parse_plan(const std::string& line);

std::string serialize_header(const DumpHeader& header);
// Throws std::runtime_error naming expected and found schema/version.
DumpHeader parse_header(const std::string& line);

void write_episode_dump(const std::filesystem::path& path,
                        const DumpHeader& header,
                        const std::vector<EpisodeRecord>& records,
                        bool trajectories);
std::vector<EpisodeRecord> read_episode_dump(const std::filesystem::path& path,
                                             DumpHeader* header = nullptr);

void write_plan_dump(const std::filesystem::path& path,
                     const DumpHeader& header,
                     const std::vector<PlanRecord>& records);
std::vector<PlanRecord> read_plan_dump(const std::filesystem::path& path);

struct SummaryInfo {
  std::string experiment;
  std::string controller;
  int particles = 0;  // 0 for single-mean controllers
};

std::string serialize_summary(const SummaryInfo& info,
                              const SummaryStats& stats);
SummaryStats parse_summary(const std::string& text, SummaryInfo* info);

}  // namespace svmpc

#endif  // SVMPC_HARNESS_DUMP_H_
