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

#ifndef SVMPC_HARNESS_STATS_H_
#define SVMPC_HARNESS_STATS_H_

#include <optional>
#include <string>
#include <vector>

#include "svmpc/episode_record.h"

namespace svmpc {

struct SummaryStats {
  int trials = 0;
  int successes = 0;
  int failed = 0;                            // aborted trials
  double success_rate = 0.0;                 // percent
  std::optional<double> avg_cost_success;    // absent without successes
  std::optional<double> avg_cost_all;        // over trials that did not abort
  std::vector<double> per_trial_costs;
  std::vector<double> wall_clock_seconds;    // not serialized

  bool operator==(const SummaryStats& other) const;
};

// Throws std::invalid_argument for an empty record list.
SummaryStats aggregate(const std::vector<EpisodeRecord>& records);

std::string table_header();
// "| controller | particles | avg cost of success (x1e3) | success (%) |"
std::string table_row(const std::string& controller, int particles,
                      const SummaryStats& stats);

}  // namespace svmpc

#endif  // SVMPC_HARNESS_STATS_H_
