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

#ifndef SVMPC_HARNESS_PRESETS_H_
#define SVMPC_HARNESS_PRESETS_H_

#include <string>
#include <vector>

#include "svmpc/harness/config.h"

namespace svmpc {

struct Preset {
  std::string name;
  std::string description;
  ExperimentConfig config;
};

// Planar-navigation benchmark (SV-MPC with 32/12/6 particles, MPPI, CEM)
// and the two-obstacle planning scenario.
const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

}  // namespace svmpc

#endif  // SVMPC_HARNESS_PRESETS_H_
