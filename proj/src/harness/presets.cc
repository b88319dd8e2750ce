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

#include "svmpc/harness/presets.h"

namespace svmpc {
namespace {

constexpr int kNavSamplesPerParticle = 8;
constexpr int kNavReferenceParticles = 32;

ExperimentConfig NavBase(const std::string& name, ControllerKind controller) {
  ExperimentConfig c;
  c.name = name;
  c.controller = controller;
  c.environment = EnvironmentKind::kPlanarNav;
  c.trials = 25;
  c.seed = 1;
  c.output = "results/" + name;
  c.baseline.kind = controller == ControllerKind::kCem ? BaselineKind::kCem
                                                       : BaselineKind::kMppi;
  // Baselines draw as many rollouts per iteration as the largest SV-MPC
  // configuration.
  c.baseline.samples = kNavReferenceParticles * kNavSamplesPerParticle;
  return c;
}

ExperimentConfig NavSvmpc(int particles) {
  ExperimentConfig c =
      NavBase("nav-svmpc-" + std::to_string(particles), ControllerKind::kSvmpc);
  c.svmpc.particles = particles;
  c.svmpc.samples = kNavSamplesPerParticle;
  // A 64-step horizon is 128-dimensional; the clique kernel keeps the
  // repulsive term from vanishing.
  c.svmpc.kernel.structure = KernelStructure::kFactorized;
  return c;
}

ExperimentConfig Planner() {
  ExperimentConfig c;
  c.name = "plan-svtrajopt";
  c.controller = ControllerKind::kSvTrajopt;
  c.environment = EnvironmentKind::kPlanning;
  c.trials = 1;
  c.seed = 1;
  c.output = "results/plan-svtrajopt";
  return c;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {
      {"nav-svmpc-32", "planar navigation, SV-MPC with 32 particles",
       NavSvmpc(32)},
      {"nav-svmpc-12", "planar navigation, SV-MPC with 12 particles",
       NavSvmpc(12)},
      {"nav-svmpc-6", "planar navigation, SV-MPC with 6 particles",
       NavSvmpc(6)},
      {"nav-mppi", "planar navigation, MPPI",
       NavBase("nav-mppi", ControllerKind::kMppi)},
      {"nav-cem", "planar navigation, CEM",
       NavBase("nav-cem", ControllerKind::kCem)},
      {"plan-svtrajopt", "two-obstacle planning, SV-TrajOpt", Planner()},
  };
  return all;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace svmpc
