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

// Command-line front end: run experiments, re-summarize dumps, list presets.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "svmpc/harness/config.h"
#include "svmpc/harness/dump.h"
#include "svmpc/harness/experiment.h"
#include "svmpc/harness/presets.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;

// A path that exists is a config file; otherwise a preset name.
svmpc::ExperimentConfig Resolve(const std::string& source) {
  if (std::filesystem::exists(source)) return svmpc::load_config(source);
  if (const auto* preset = svmpc::find_preset(source)) return preset->config;
  throw svmpc::ConfigError("config",
                           "'" + source + "' is neither a file nor a preset");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stein variational MPC experiments"};
  app.require_subcommand(1);

  std::string source;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::optional<std::string> dump;
  auto* run = app.add_subcommand("run", "run an experiment");
  run->add_option("config", source, "config file or preset name")->required();
  run->add_option("--seed", seed, "root seed");
  run->add_option("--trials", trials, "number of trials");
  run->add_option("--workers", workers, "trials run in parallel");
  run->add_option("--out", out, "output directory");
  run->add_option("--dump", dump, "summary or full")
      ->check(CLI::IsMember({"summary", "full"}));

  std::string dump_dir;
  auto* summarize =
      app.add_subcommand("summarize", "recompute statistics from a dump");
  summarize->add_option("dump-dir", dump_dir, "experiment output directory")
      ->required()
      ->check(CLI::ExistingDirectory);

  auto* presets = app.add_subcommand("presets", "built-in configurations");
  presets->require_subcommand(1);
  auto* list = presets->add_subcommand("list", "list preset names");
  std::string show_name;
  auto* show = presets->add_subcommand("show", "print a preset as config text");
  show->add_option("name", show_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*run) {
      svmpc::ExperimentConfig cfg;
      try {
        cfg = Resolve(source);
        if (seed) cfg.seed = *seed;
        if (trials) cfg.trials = *trials;
        if (workers) cfg.workers = *workers;
        if (out) cfg.output = *out;
        if (dump) {
          cfg.dump = *dump == "full" ? svmpc::DumpLevel::kFull
                                     : svmpc::DumpLevel::kSummary;
        }
        cfg.Validate();
      } catch (const svmpc::ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalid;
      }
      const auto result = svmpc::run_experiment(cfg, true, &std::cout);
      std::cout << "wrote " << cfg.output << "\n";
      return result.stats.failed == result.stats.trials ? kExitRuntime : 0;
    }
    if (*summarize) {
      svmpc::SummaryInfo info;
      const auto stats = svmpc::summarize_directory(dump_dir, &info);
      std::cout << svmpc::table_header() << "\n"
                << svmpc::table_row(info.controller, info.particles, stats)
                << "\n";
      return 0;
    }
    if (*list) {
      for (const auto& p : svmpc::presets()) {
        std::cout << p.name << "  " << p.description << "\n";
      }
      return 0;
    }
    if (*show) {
      const auto* p = svmpc::find_preset(show_name);
      if (p == nullptr) {
        std::cerr << "unknown preset '" << show_name << "'\n";
        return kExitInvalid;
      }
      std::cout << svmpc::to_config_text(p->config);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
