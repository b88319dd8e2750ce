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

#include "svmpc/harness/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace svmpc {
namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(Trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> Words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T ParseNumber(std::string_view v, const std::string& key) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key, "cannot parse '" + std::string(v) + "'");
  }
  return out;
}

std::string Fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool ParseBool(std::string_view v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + std::string(v) + "'");
}

Eigen::Vector2d ParseVec2(std::string_view v, const std::string& key) {
  const auto w = Words(v);
  if (w.size() != 2) throw ConfigError(key, "expected two numbers");
  return {ParseNumber<double>(w[0], key), ParseNumber<double>(w[1], key)};
}

std::string FmtVec2(const Eigen::Vector2d& v) {
  return Fmt(v.x()) + ", " + Fmt(v.y());
}

template <class E>
E ParseEnum(std::string_view v, const std::string& key,
            const std::vector<std::pair<std::string_view, E>>& names) {
  std::string options;
  for (const auto& [name, value] : names) {
    if (v == name) return value;
    options += (options.empty() ? "" : "|") + std::string(name);
  }
  throw ConfigError(key, "expected one of " + options + ", got '" +
                             std::string(v) + "'");
}

template <class E>
std::string EnumName(E value,
                     const std::vector<std::pair<std::string_view, E>>& names) {
  for (const auto& [name, v] : names) {
    if (v == value) return std::string(name);
  }
  return "?";
}

const std::vector<std::pair<std::string_view, ControllerKind>> kControllers = {
    {"svmpc", ControllerKind::kSvmpc},
    {"mppi", ControllerKind::kMppi},
    {"cem", ControllerKind::kCem},
    {"svtrajopt", ControllerKind::kSvTrajopt}};
const std::vector<std::pair<std::string_view, EnvironmentKind>> kEnvs = {
    {"planar_nav", EnvironmentKind::kPlanarNav},
    {"planning", EnvironmentKind::kPlanning}};
const std::vector<std::pair<std::string_view, DumpLevel>> kDumps = {
    {"summary", DumpLevel::kSummary}, {"full", DumpLevel::kFull}};
const std::vector<std::pair<std::string_view, PriorKind>> kPriors = {
    {"uniform", PriorKind::kUniform}, {"mixture", PriorKind::kShiftedMixture}};
const std::vector<std::pair<std::string_view, ActionSelection>> kActions = {
    {"map", ActionSelection::kMap},
    {"categorical", ActionSelection::kCategorical}};
const std::vector<std::pair<std::string_view, KernelStructure>> kKernels = {
    {"full", KernelStructure::kFull},
    {"factorized", KernelStructure::kFactorized}};

// "eu <alpha>" or "plc <elite fraction>"
LikelihoodSpec ParseLikelihood(std::string_view v, const std::string& key) {
  const auto w = Words(v);
  if (w.size() == 2 && w[0] == "eu") {
    return ExponentiatedUtility{ParseNumber<double>(w[1], key)};
  }
  if (w.size() == 2 && w[0] == "plc") {
    return ProbabilityOfLowCost{ParseNumber<double>(w[1], key)};
  }
  throw ConfigError(key, "expected 'eu <alpha>' or 'plc <elite fraction>'");
}

std::string FmtLikelihood(const LikelihoodSpec& spec) {
  if (const auto* eu = std::get_if<ExponentiatedUtility>(&spec)) {
    return "eu " + Fmt(eu->alpha);
  }
  return "plc " + Fmt(std::get<ProbabilityOfLowCost>(spec).elite_fraction);
}

// "median" or a fixed bandwidth value.
void ParseBandwidth(std::string_view v, const std::string& key,
                    KernelSpec& kernel) {
  if (v == "median") {
    kernel.bandwidth = BandwidthPolicy::kMedianHeuristic;
    return;
  }
  kernel.bandwidth = BandwidthPolicy::kFixed;
  kernel.fixed_bandwidth = ParseNumber<double>(v, key);
}

std::string FmtBandwidth(const KernelSpec& kernel) {
  return kernel.bandwidth == BandwidthPolicy::kMedianHeuristic
             ? "median"
             : Fmt(kernel.fixed_bandwidth);
}

// "mx my variance weight; ..." with isotropic covariances.
std::vector<GaussianComponent> ParseObstacles(std::string_view v,
                                              const std::string& key) {
  std::vector<GaussianComponent> out;
  if (Trim(v).empty()) return out;
  for (auto item : Split(v, ';')) {
    const auto w = Words(item);
    if (w.size() != 4) {
      throw ConfigError(key, "each obstacle needs 'mx my variance weight'");
    }
    GaussianComponent c;
    c.mean = {ParseNumber<double>(w[0], key), ParseNumber<double>(w[1], key)};
    const double var = ParseNumber<double>(w[2], key);
    if (!(var > 0.0)) throw ConfigError(key, "obstacle variance must be > 0");
    c.covariance = var * Eigen::Matrix2d::Identity();
    c.weight = ParseNumber<double>(w[3], key);
    out.push_back(c);
  }
  return out;
}

std::string FmtObstacles(const std::vector<GaussianComponent>& obstacles) {
  std::string out;
  for (const auto& c : obstacles) {
    if (!out.empty()) out += "; ";
    out += Fmt(c.mean.x()) + " " + Fmt(c.mean.y()) + " " +
           Fmt(c.covariance(0, 0)) + " " + Fmt(c.weight);
  }
  return out;
}

using Cfg = ExperimentConfig;

struct Field {
  std::function<void(Cfg&, std::string_view, const std::string&)> set;
  std::function<std::string(const Cfg&)> get;
};

template <class T, class Access>
Field Number(Access access) {
  return {[access](Cfg& c, std::string_view v, const std::string& key) {
            access(c) = ParseNumber<T>(v, key);
          },
          [access](const Cfg& c) {
            const T v = access(const_cast<Cfg&>(c));
            if constexpr (std::is_floating_point_v<T>) {
              return Fmt(v);
            } else {
              return std::to_string(v);
            }
          }};
}

template <class Access>
Field Bool(Access access) {
  return {[access](Cfg& c, std::string_view v, const std::string& key) {
            access(c) = ParseBool(v, key);
          },
          [access](const Cfg& c) {
            return std::string(access(const_cast<Cfg&>(c)) ? "true" : "false");
          }};
}

template <class Access>
Field Vec2(Access access) {
  return {[access](Cfg& c, std::string_view v, const std::string& key) {
            access(c) = ParseVec2(v, key);
          },
          [access](const Cfg& c) {
            return FmtVec2(access(const_cast<Cfg&>(c)));
          }};
}

template <class E, class Access>
Field Enum(const std::vector<std::pair<std::string_view, E>>& names,
           Access access) {
  return {[&names, access](Cfg& c, std::string_view v, const std::string& key) {
            access(c) = ParseEnum(v, key, names);
          },
          [&names, access](const Cfg& c) {
            return EnumName(access(const_cast<Cfg&>(c)), names);
          }};
}

#define SVMPC_REF(expr) [](Cfg & c) -> auto& { return c.expr; }

const std::vector<std::pair<std::string, Field>>& Fields() {
  static const std::vector<std::pair<std::string, Field>> fields = {
      {"experiment.name",
       {[](Cfg& c, std::string_view v, const std::string&) {
          c.name = std::string(v);
        },
        [](const Cfg& c) { return c.name; }}},
      {"experiment.controller", Enum(kControllers, SVMPC_REF(controller))},
      {"experiment.environment", Enum(kEnvs, SVMPC_REF(environment))},
      {"experiment.trials", Number<int>(SVMPC_REF(trials))},
      {"experiment.seed", Number<std::uint64_t>(SVMPC_REF(seed))},
      {"experiment.output",
       {[](Cfg& c, std::string_view v, const std::string&) {
          c.output = std::string(v);
        },
        [](const Cfg& c) { return c.output; }}},
      {"experiment.dump", Enum(kDumps, SVMPC_REF(dump))},
      {"experiment.workers", Number<int>(SVMPC_REF(workers))},

      {"nav.dt", Number<double>(SVMPC_REF(nav.dt))},
      {"nav.dynamics_noise", Number<double>(SVMPC_REF(nav.dynamics_noise))},
      {"nav.control_limit", Number<double>(SVMPC_REF(nav.control_limit))},
      {"nav.start", Vec2(SVMPC_REF(nav.start))},
      {"nav.start_velocity", Vec2(SVMPC_REF(nav.start_velocity))},
      {"nav.model_noise", Bool(SVMPC_REF(nav.model_noise))},
      {"nav.grid.rows", Number<int>(SVMPC_REF(nav.grid.rows))},
      {"nav.grid.cols", Number<int>(SVMPC_REF(nav.grid.cols))},
      {"nav.grid.radius", Number<double>(SVMPC_REF(nav.grid.radius))},
      {"nav.grid.spacing", Number<double>(SVMPC_REF(nav.grid.spacing))},
      {"nav.grid.center", Vec2(SVMPC_REF(nav.grid.center))},
      {"nav.goal", Vec2(SVMPC_REF(nav.grid.goal))},
      {"nav.goal_radius", Number<double>(SVMPC_REF(nav.grid.goal_radius))},
      {"nav.cost.position", Number<double>(SVMPC_REF(nav.costs.position))},
      {"nav.cost.velocity", Number<double>(SVMPC_REF(nav.costs.velocity))},
      {"nav.cost.control", Number<double>(SVMPC_REF(nav.costs.control))},
      {"nav.cost.terminal_position",
       Number<double>(SVMPC_REF(nav.costs.terminal_position))},
      {"nav.cost.terminal_velocity",
       Number<double>(SVMPC_REF(nav.costs.terminal_velocity))},

      {"planning.dt", Number<double>(SVMPC_REF(planning.dt))},
      {"planning.horizon", Number<int>(SVMPC_REF(planning.horizon))},
      {"planning.start", Vec2(SVMPC_REF(planning.start))},
      {"planning.goal", Vec2(SVMPC_REF(planning.goal))},
      {"planning.collision_scale",
       Number<double>(SVMPC_REF(planning.collision_scale))},
      {"planning.terminal_weight",
       Number<double>(SVMPC_REF(planning.terminal_weight))},
      {"planning.obstacles",
       {[](Cfg& c, std::string_view v, const std::string& key) {
          c.planning.obstacles = ParseObstacles(v, key);
        },
        [](const Cfg& c) { return FmtObstacles(c.planning.obstacles); }}},

      {"svmpc.horizon", Number<int>(SVMPC_REF(svmpc.horizon))},
      {"svmpc.particles", Number<int>(SVMPC_REF(svmpc.particles))},
      {"svmpc.samples", Number<int>(SVMPC_REF(svmpc.samples))},
      {"svmpc.step_size", Number<double>(SVMPC_REF(svmpc.step_size))},
      {"svmpc.warm_start", Number<int>(SVMPC_REF(svmpc.warm_start_iters))},
      {"svmpc.iterations", Number<int>(SVMPC_REF(svmpc.iters_per_timestep))},
      {"svmpc.episode_length", Number<int>(SVMPC_REF(svmpc.episode_length))},
      {"svmpc.likelihood",
       {[](Cfg& c, std::string_view v, const std::string& key) {
          c.svmpc.likelihood = ParseLikelihood(v, key);
        },
        [](const Cfg& c) { return FmtLikelihood(c.svmpc.likelihood); }}},
      {"svmpc.prior", Enum(kPriors, SVMPC_REF(svmpc.prior))},
      {"svmpc.prior_variance", Number<double>(SVMPC_REF(svmpc.prior_variance))},
      {"svmpc.kernel", Enum(kKernels, SVMPC_REF(svmpc.kernel.structure))},
      {"svmpc.bandwidth",
       {[](Cfg& c, std::string_view v, const std::string& key) {
          ParseBandwidth(v, key, c.svmpc.kernel);
        },
        [](const Cfg& c) { return FmtBandwidth(c.svmpc.kernel); }}},
      {"svmpc.variance", Number<double>(SVMPC_REF(svmpc.variance))},
      {"svmpc.action", Enum(kActions, SVMPC_REF(svmpc.action_selection))},
      {"svmpc.sample_action", Bool(SVMPC_REF(svmpc.sample_action))},
      {"svmpc.init_jitter", Number<double>(SVMPC_REF(svmpc.init_jitter_variance))},
      {"svmpc.gradient_clip", Number<double>(SVMPC_REF(svmpc.gradient_clip))},
      {"svmpc.workers", Number<int>(SVMPC_REF(svmpc.workers))},
      {"svmpc.snapshot_stride", Number<int>(SVMPC_REF(svmpc.snapshot_stride))},

      {"baseline.horizon", Number<int>(SVMPC_REF(baseline.horizon))},
      {"baseline.samples", Number<int>(SVMPC_REF(baseline.samples))},
      {"baseline.alpha", Number<double>(SVMPC_REF(baseline.alpha))},
      {"baseline.elite_fraction",
       Number<double>(SVMPC_REF(baseline.elite_fraction))},
      {"baseline.variance", Number<double>(SVMPC_REF(baseline.variance))},
      {"baseline.warm_start", Number<int>(SVMPC_REF(baseline.warm_start_iters))},
      {"baseline.iterations",
       Number<int>(SVMPC_REF(baseline.iters_per_timestep))},
      {"baseline.episode_length",
       Number<int>(SVMPC_REF(baseline.episode_length))},
      {"baseline.snapshot_stride",
       Number<int>(SVMPC_REF(baseline.snapshot_stride))},

      {"trajopt.particles", Number<int>(SVMPC_REF(trajopt.particles))},
      {"trajopt.step_size", Number<double>(SVMPC_REF(trajopt.step_size))},
      {"trajopt.max_iterations", Number<int>(SVMPC_REF(trajopt.max_iterations))},
      {"trajopt.tolerance", Number<double>(SVMPC_REF(trajopt.tolerance))},
      {"trajopt.refinement_iterations",
       Number<int>(SVMPC_REF(trajopt.refinement_iterations))},
      {"trajopt.refinement_step",
       Number<double>(SVMPC_REF(trajopt.refinement_step))},
      {"trajopt.alpha", Number<double>(SVMPC_REF(trajopt.alpha))},
      {"trajopt.prior_variance",
       Number<double>(SVMPC_REF(trajopt.prior_variance))},
      {"trajopt.kernel", Enum(kKernels, SVMPC_REF(trajopt.kernel.structure))},
      {"trajopt.bandwidth",
       {[](Cfg& c, std::string_view v, const std::string& key) {
          ParseBandwidth(v, key, c.trajopt.kernel);
        },
        [](const Cfg& c) { return FmtBandwidth(c.trajopt.kernel); }}},
      {"trajopt.workers", Number<int>(SVMPC_REF(trajopt.workers))},
  };
  return fields;
}

#undef SVMPC_REF

const Field* FindField(std::string_view key) {
  for (const auto& [name, field] : Fields()) {
    if (name == key) return &field;
  }
  return nullptr;
}

// Runs a module validator and re-labels its error with the config section.
template <class Fn>
void Check(const char* section, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(section, e.what());
  }
}

}  // namespace

std::string_view controller_name(ControllerKind kind) {
  for (const auto& [name, v] : kControllers) {
    if (v == kind) return name;
  }
  return "?";
}

void ExperimentConfig::Validate() const {
  if (trials < 1) throw ConfigError("experiment.trials", "must be >= 1");
  if (workers < 1) throw ConfigError("experiment.workers", "must be >= 1");
  if (output.empty()) throw ConfigError("experiment.output", "must be set");
  const bool planner = controller == ControllerKind::kSvTrajopt;
  if (planner != (environment == EnvironmentKind::kPlanning)) {
    throw ConfigError("experiment.environment",
                      "svtrajopt runs on 'planning'; MPC controllers run on "
                      "'planar_nav'");
  }
  switch (controller) {
    case ControllerKind::kSvmpc:
      Check("nav", [&] { nav.Validate(); });
      Check("svmpc", [&] { svmpc.Validate(); });
      break;
    case ControllerKind::kMppi:
    case ControllerKind::kCem:
      Check("nav", [&] { nav.Validate(); });
      Check("baseline", [&] { baseline.Validate(); });
      break;
    case ControllerKind::kSvTrajopt:
      Check("planning", [&] { planning.Validate(); });
      Check("trajopt", [&] { trajopt.Validate(); });
      break;
  }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::set<std::string> seen;
  int line_no = 0;
  for (auto line : Split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = Trim(line.substr(0, hash));
    }
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no),
                        "expected 'key = value'");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string_view value = Trim(line.substr(eq + 1));
    const Field* field = FindField(key);
    if (field == nullptr) throw ConfigError(key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");
    field->set(base, value, key);
  }
  base.baseline.kind = base.controller == ControllerKind::kCem
                           ? BaselineKind::kCem
                           : BaselineKind::kMppi;
  base.Validate();
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file", "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string to_config_text(const ExperimentConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& [name, field] : Fields()) {
    const std::string prefix = name.substr(0, name.find('.'));
    if (prefix != section) {
      if (!section.empty()) out += "\n";
      section = prefix;
    }
    out += name + " = " + field.get(cfg) + "\n";
  }
  return out;
}

}  // namespace svmpc
