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

#include "svmpc/harness/stats.h"

#include <cstdio>
#include <stdexcept>

namespace svmpc {

bool SummaryStats::operator==(const SummaryStats& other) const {
  // Wall-clock times are measurements, not results.
  return trials == other.trials && successes == other.successes &&
         failed == other.failed && success_rate == other.success_rate &&
         avg_cost_success == other.avg_cost_success &&
         avg_cost_all == other.avg_cost_all &&
         per_trial_costs == other.per_trial_costs;
}

SummaryStats aggregate(const std::vector<EpisodeRecord>& records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  SummaryStats s;
  s.trials = static_cast<int>(records.size());
  double success_sum = 0.0;
  double all_sum = 0.0;
  int completed = 0;
  for (const auto& r : records) {
    s.per_trial_costs.push_back(r.total_cost);
    if (r.failed) {
      ++s.failed;
      continue;
    }
    ++completed;
    all_sum += r.total_cost;
    if (r.success) {
      ++s.successes;
      success_sum += r.total_cost;
    }
  }
  s.success_rate = 100.0 * s.successes / s.trials;
  if (s.successes > 0) s.avg_cost_success = success_sum / s.successes;
  if (completed > 0) s.avg_cost_all = all_sum / completed;
  return s;
}

std::string table_header() {
  return "| Controller | Particles | Avg. cost of success (x1e3) | "
         "Success rate (%) |\n"
         "|---|---|---|---|";
}

std::string table_row(const std::string& controller, int particles,
                      const SummaryStats& stats) {
  char cost[32] = "-";
  if (stats.avg_cost_success) {
    std::snprintf(cost, sizeof(cost), "%.1f", *stats.avg_cost_success / 1e3);
  }
  char rate[32];
  std::snprintf(rate, sizeof(rate), "%.0f", stats.success_rate);
  return "| " + controller + " | " +
         (particles > 0 ? std::to_string(particles) : std::string("-")) +
         " | " + cost + " | " + rate + " |";
}

}  // namespace svmpc
