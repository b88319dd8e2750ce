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

#ifndef SVMPC_HARNESS_CONFIG_H_
#define SVMPC_HARNESS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "svmpc/baselines.h"
#include "svmpc/cost_map.h"
#include "svmpc/mpc.h"
#include "svmpc/planar_nav.h"
#include "svmpc/trajopt.h"

namespace svmpc {

enum class ControllerKind { kSvmpc, kMppi, kCem, kSvTrajopt };
enum class EnvironmentKind { kPlanarNav, kPlanning };
enum class DumpLevel { kSummary, kFull };

struct ExperimentConfig {
  std::string name = "experiment";
  ControllerKind controller = ControllerKind::kSvmpc;
  EnvironmentKind environment = EnvironmentKind::kPlanarNav;
  int trials = 25;
  std::uint64_t seed = 0;
  std::string output = "results";
  DumpLevel dump = DumpLevel::kSummary;
  int workers = 1;  // trials in flight

  NavParams nav;
  PlanningParams planning;
  MpcConfig svmpc;
  BaselineConfig baseline;
  TrajOptConfig trajopt;

  // Throws ConfigError naming the first offending key.
  void Validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Flat "section.key = value" text; '#' starts a comment. Keys not present
// keep their defaults. Unknown keys, duplicates and malformed values raise
// ConfigError.
ExperimentConfig parse_config(std::string_view text,
                              ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Every key with its current value, in parse_config's format.
std::string to_config_text(const ExperimentConfig& cfg);

std::string_view controller_name(ControllerKind kind);

}  // namespace svmpc

#endif  // SVMPC_HARNESS_CONFIG_H_
