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

#include "svmpc/harness/dump.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace svmpc {
namespace {

using nlohmann::json;

json Num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double ToNum(const json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::runtime_error("dump: bad number '" + s + "'");
  }
  return j.get<double>();
}

json Vec(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(Num(x));
  return out;
}

std::vector<double> ToVec(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(ToNum(x));
  return out;
}

// Row-major nested arrays; an empty matrix keeps its column count.
json Mat(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Num(m(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"cols", m.cols()}, {"rows", std::move(rows)}};
}

Eigen::MatrixXd ToMat(const json& j) {
  const auto& rows = j.at("rows");
  const auto cols = j.at("cols").get<Eigen::Index>();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto& row = rows[r];
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::runtime_error("dump: ragged matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = ToNum(row[c]);
  }
  return m;
}

json Snapshots(const std::vector<ParticleSnapshot>& snaps) {
  json out = json::array();
  for (const auto& s : snaps) {
    json paths = json::array();
    for (const auto& p : s.paths) paths.push_back(Mat(p));
    out.push_back({{"timestep", s.timestep}, {"paths", std::move(paths)}});
  }
  return out;
}

std::vector<ParticleSnapshot> ToSnapshots(const json& j) {
  std::vector<ParticleSnapshot> out;
  for (const auto& s : j) {
    ParticleSnapshot snap;
    snap.timestep = s.at("timestep").get<int>();
    for (const auto& p : s.at("paths")) snap.paths.push_back(ToMat(p));
    out.push_back(std::move(snap));
  }
  return out;
}

json Parse(const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("dump: malformed record: ") +
                             e.what());
  }
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("dump: cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(std::move(line));
  }
  if (lines.empty()) throw std::runtime_error("dump: empty file " + path.string());
  return lines;
}

void WriteLines(const std::filesystem::path& path,
                const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("dump: cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace

bool PlanRecord::operator==(const PlanRecord& o) const {
  auto same = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.size() == 0 || (a.array() == b.array()).all());
  };
  if (trial != o.trial || seed != o.seed || best != o.best ||
      svgd_iterations != o.svgd_iterations || converged != o.converged ||
      feasible != o.feasible || best_cost != o.best_cost ||
      max_obstacle_density != o.max_obstacle_density ||
      terminal_distance != o.terminal_distance ||
      log_posterior != o.log_posterior ||
      refinement_traces != o.refinement_traces ||
      particles.size() != o.particles.size() ||
      snapshots.size() != o.snapshots.size()) {
    return false;
  }
  for (std::size_t i = 0; i < particles.size(); ++i) {
    if (!same(particles[i], o.particles[i])) return false;
  }
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    if (snapshots[i].timestep != o.snapshots[i].timestep ||
        snapshots[i].paths.size() != o.snapshots[i].paths.size()) {
      return false;
    }
    for (std::size_t k = 0; k < snapshots[i].paths.size(); ++k) {
      if (!same(snapshots[i].paths[k], o.snapshots[i].paths[k])) return false;
    }
  }
  return true;
}

std::string serialize_episode(const EpisodeRecord& r, bool trajectories) {
  json j = {{"controller", r.controller},
            {"trial", r.trial},
            {"seed", r.seed},
            {"total_cost", Num(r.total_cost)},
            {"crashed", r.crashed},
            {"success", r.success},
            {"failed", r.failed},
            {"error", r.error}};
  if (trajectories) {
    j["controls"] = Mat(r.controls);
    j["states"] = Mat(r.states);
    j["selected"] = r.selected;
    json weights = json::array();
    for (const auto& w : r.weights) weights.push_back(Vec(w));
    j["weights"] = std::move(weights);
    j["snapshots"] = Snapshots(r.snapshots);
  }
  return j.dump();
}

EpisodeRecord parse_episode(const std::string& line) {
  const json j = Parse(line);
  EpisodeRecord r;
  try {
    r.controller = j.at("controller").get<std::string>();
    r.trial = j.at("trial").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.total_cost = ToNum(j.at("total_cost"));
    r.crashed = j.at("crashed").get<bool>();
    r.success = j.at("success").get<bool>();
    r.failed = j.at("failed").get<bool>();
    r.error = j.at("error").get<std::string>();
    if (j.contains("controls")) {
      r.controls = ToMat(j.at("controls"));
      r.states = ToMat(j.at("states"));
      r.selected = j.at("selected").get<std::vector<int>>();
      for (const auto& w : j.at("weights")) r.weights.push_back(ToVec(w));
      r.snapshots = ToSnapshots(j.at("snapshots"));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("dump: bad episode record: ") +
                             e.what());
  }
  return r;
}

std::string serialize_plan(const PlanRecord& r) {
  json particles = json::array();
  for (const auto& p : r.particles) particles.push_back(Mat(p));
  json traces = json::array();
  for (const auto& t : r.refinement_traces) traces.push_back(Vec(t));
  json j = {{"trial", r.trial},
            {"seed", r.seed},
            {"best", r.best},
            {"svgd_iterations", r.svgd_iterations},
            {"converged", r.converged},
            {"feasible", r.feasible},
            {"best_cost", Num(r.best_cost)},
            {"max_obstacle_density", Num(r.max_obstacle_density)},
            {"terminal_distance", Num(r.terminal_distance)},
            {"log_posterior", Vec(r.log_posterior)},
            {"refinement_traces", std::move(traces)},
            {"particles", std::move(particles)},
            {"snapshots", Snapshots(r.snapshots)}};
  return j.dump();
}

PlanRecord parse_plan(const std::string& line) {
  const json j = Parse(line);
  PlanRecord r;
  try {
    r.trial = j.at("trial").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.best = j.at("best").get<int>();
    r.svgd_iterations = j.at("svgd_iterations").get<int>();
    r.converged = j.at("converged").get<bool>();
    r.feasible = j.at("feasible").get<bool>();
    r.best_cost = ToNum(j.at("best_cost"));
    r.max_obstacle_density = ToNum(j.at("max_obstacle_density"));
    r.terminal_distance = ToNum(j.at("terminal_distance"));
    r.log_posterior = ToVec(j.at("log_posterior"));
    for (const auto& t : j.at("refinement_traces")) {
      r.refinement_traces.push_back(ToVec(t));
    }
    for (const auto& p : j.at("particles")) r.particles.push_back(ToMat(p));
    r.snapshots = ToSnapshots(j.at("snapshots"));
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("dump: bad plan record: ") + e.what());
  }
  return r;
}

std::string serialize_header(const DumpHeader& h) {
  return json{{"schema", kDumpSchema},
              {"version", kDumpVersion},
              {"kind", h.kind},
              {"experiment", h.experiment},
              {"controller", h.controller},
              {"particles", h.particles}}
      .dump();
}

DumpHeader parse_header(const std::string& line) {
  const json j = Parse(line);
  const std::string schema = j.value("schema", std::string());
  const int version = j.value("version", -1);
  if (schema != kDumpSchema || version != kDumpVersion) {
    throw std::runtime_error(
        "dump: expected schema " + std::string(kDumpSchema) + " version " +
        std::to_string(kDumpVersion) + ", found " +
        (schema.empty() ? std::string("<none>") : schema) + " version " +
        std::to_string(version));
  }
  return {j.value("kind", std::string()), j.value("experiment", std::string()),
          j.value("controller", std::string()), j.value("particles", 0)};
}

void write_episode_dump(const std::filesystem::path& path,
                        const DumpHeader& header,
                        const std::vector<EpisodeRecord>& records,
                        bool trajectories) {
  std::vector<std::string> lines = {serialize_header(header)};
  for (const auto& r : records) {
    lines.push_back(serialize_episode(r, trajectories));
  }
  WriteLines(path, lines);
}

std::vector<EpisodeRecord> read_episode_dump(const std::filesystem::path& path,
                                             DumpHeader* header) {
  const auto lines = ReadLines(path);
  const DumpHeader h = parse_header(lines.front());
  if (h.kind != "episodes") {
    throw std::runtime_error("dump: " + path.string() +
                             " holds '" + h.kind + "', not episodes");
  }
  if (header != nullptr) *header = h;
  std::vector<EpisodeRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    out.push_back(parse_episode(lines[i]));
  }
  return out;
}

void write_plan_dump(const std::filesystem::path& path,
                     const DumpHeader& header,
                     const std::vector<PlanRecord>& records) {
  std::vector<std::string> lines = {serialize_header(header)};
  for (const auto& r : records) lines.push_back(serialize_plan(r));
  WriteLines(path, lines);
}

std::vector<PlanRecord> read_plan_dump(const std::filesystem::path& path) {
  const auto lines = ReadLines(path);
  const DumpHeader h = parse_header(lines.front());
  if (h.kind != "plans") {
    throw std::runtime_error("dump: " + path.string() + " holds '" + h.kind +
                             "', not plans");
  }
  std::vector<PlanRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    out.push_back(parse_plan(lines[i]));
  }
  return out;
}

std::string serialize_summary(const SummaryInfo& info,
                              const SummaryStats& s) {
  auto opt = [](const std::optional<double>& v) -> json {
    return v ? Num(*v) : json(nullptr);
  };
  return json{{"schema", kSummarySchema},
              {"version", kDumpVersion},
              {"experiment", info.experiment},
              {"controller", info.controller},
              {"particles", info.particles},
              {"trials", s.trials},
              {"successes", s.successes},
              {"failed", s.failed},
              {"success_rate", Num(s.success_rate)},
              {"avg_cost_success", opt(s.avg_cost_success)},
              {"avg_cost_all", opt(s.avg_cost_all)},
              {"per_trial_costs", Vec(s.per_trial_costs)}}
             .dump(2) +
         "\n";
}

SummaryStats parse_summary(const std::string& text, SummaryInfo* info) {
  const json j = Parse(text);
  if (j.value("schema", std::string()) != kSummarySchema ||
      j.value("version", -1) != kDumpVersion) {
    throw std::runtime_error("summary: expected schema " +
                             std::string(kSummarySchema) + " version " +
                             std::to_string(kDumpVersion));
  }
  SummaryStats s;
  auto opt = [](const json& v) -> std::optional<double> {
    if (v.is_null()) return std::nullopt;
    return ToNum(v);
  };
  try {
    if (info != nullptr) {
      info->experiment = j.at("experiment").get<std::string>();
      info->controller = j.at("controller").get<std::string>();
      info->particles = j.at("particles").get<int>();
    }
    s.trials = j.at("trials").get<int>();
    s.successes = j.at("successes").get<int>();
    s.failed = j.at("failed").get<int>();
    s.success_rate = ToNum(j.at("success_rate"));
    s.avg_cost_success = opt(j.at("avg_cost_success"));
    s.avg_cost_all = opt(j.at("avg_cost_all"));
    s.per_trial_costs = ToVec(j.at("per_trial_costs"));
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("summary: ") + e.what());
  }
  return s;
}

}  // namespace svmpc
