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

#include "svmpc/svgd.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace svmpc {
namespace {

// Contiguous block of rows that one RBF factor acts on.
struct Clique {
  int first_row;
  int num_rows;
};

std::vector<Clique> MakeCliques(int horizon, KernelStructure structure) {
  std::vector<Clique> cliques;
  if (structure == KernelStructure::kFull) {
    cliques.push_back({0, horizon});
    return cliques;
  }
  cliques.reserve(2 * horizon - 1);
  for (int t = 0; t < horizon; ++t) cliques.push_back({t, 1});
  for (int t = 0; t + 1 < horizon; ++t) cliques.push_back({t, 2});
  return cliques;
}

Eigen::VectorXd Flatten(const ParamSequence& theta, const Clique& c) {
  ParamSequence block = theta.middleRows(c.first_row, c.num_rows);
  return Eigen::Map<const Eigen::VectorXd>(block.data(), block.size());
}

double CliqueBandwidth(const ParticleSet& set, const Clique& c,
                       const KernelSpec& spec) {
  if (spec.bandwidth == BandwidthPolicy::kFixed) return spec.fixed_bandwidth;
  // a lone particle never reaches a repulsive term; any h works
  if (set.size() < 2) return 1.0;
  std::vector<Eigen::VectorXd> points;
  points.reserve(set.particles.size());
  for (const auto& p : set.particles) points.push_back(Flatten(p, c));
  return median_bandwidth(points);
}

void CheckShapes(const ParticleSet& set,
                 const std::vector<ParamSequence>& others,
                 const char* what) {
  if (others.size() != set.particles.size()) {
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(set.particles.size()) +
                                " matrices, got " +
                                std::to_string(others.size()));
  }
  for (std::size_t i = 0; i < others.size(); ++i) {
    if (others[i].rows() != set.particles[i].rows() ||
        others[i].cols() != set.particles[i].cols()) {
      throw std::invalid_argument(std::string(what) +
                                  ": shape mismatch at particle " +
                                  std::to_string(i));
    }
    if (!others[i].allFinite()) {
      throw std::invalid_argument(std::string(what) +
                                  ": non-finite entry at particle " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

ParticleSet ParticleSet::Uniform(std::vector<ParamSequence> particles) {
  ParticleSet set;
  const double w = particles.empty() ? 0.0 : 1.0 / particles.size();
  set.weights.assign(particles.size(), w);
  set.particles = std::move(particles);
  return set;
}

int ParticleSet::horizon() const {
  return particles.empty() ? 0 : static_cast<int>(particles.front().rows());
}

int ParticleSet::control_dim() const {
  return particles.empty() ? 0 : static_cast<int>(particles.front().cols());
}

void ParticleSet::Validate() const {
  if (particles.empty()) {
    throw std::invalid_argument("ParticleSet: needs at least one particle");
  }
  if (weights.size() != particles.size()) {
    throw std::invalid_argument("ParticleSet: weight count mismatch");
  }
  const auto rows = particles.front().rows();
  const auto cols = particles.front().cols();
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("ParticleSet: empty parameter sequence");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    if (particles[i].rows() != rows || particles[i].cols() != cols) {
      throw std::invalid_argument("ParticleSet: ragged particle " +
                                  std::to_string(i));
    }
    if (!particles[i].allFinite()) {
      throw std::invalid_argument("ParticleSet: non-finite particle " +
                                  std::to_string(i));
    }
    if (!(weights[i] >= 0.0)) {
      throw std::invalid_argument("ParticleSet: negative weight");
    }
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("ParticleSet: weights sum to " +
                                std::to_string(total));
  }
}

void KernelSpec::Validate() const {
  if (bandwidth == BandwidthPolicy::kFixed &&
      !(fixed_bandwidth > 0.0 && std::isfinite(fixed_bandwidth))) {
    throw std::invalid_argument("KernelSpec: fixed bandwidth must be > 0");
  }
}

RbfValue rbf_eval(const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b, double h) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("rbf_eval: size mismatch");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("rbf_eval: bandwidth must be positive");
  }
  if (!a.allFinite() || !b.allFinite()) {
    throw std::invalid_argument("rbf_eval: non-finite input");
  }
  RbfValue out;
  const Eigen::VectorXd diff = a - b;
  out.value = std::exp(-diff.squaredNorm() / h);
  out.grad_a = (-2.0 / h * out.value) * diff;
  return out;
}

double median_bandwidth(const std::vector<Eigen::VectorXd>& points) {
  const std::size_t m = points.size();
  if (m < 2) {
    throw std::invalid_argument(
        "median_bandwidth: needs at least two particles");
  }
  std::vector<double> dist;
  dist.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      dist.push_back((points[i] - points[j]).norm());
    }
  }
  std::sort(dist.begin(), dist.end());
  const std::size_t n = dist.size();
  const double med =
      n % 2 == 1 ? dist[n / 2] : 0.5 * (dist[n / 2 - 1] + dist[n / 2]);
  const double h = med * med / std::log(static_cast<double>(m));
  return std::max(h, kMinBandwidth);
}

KernelMatrix kernel_matrix(const ParticleSet& set, const KernelSpec& spec) {
  spec.Validate();
  const int m = set.size();
  if (m < 1) throw std::invalid_argument("kernel_matrix: empty set");
  const int horizon = set.horizon();
  const int dim = set.control_dim();

  const std::vector<Clique> cliques = MakeCliques(horizon, spec.structure);
  std::vector<double> bandwidth(cliques.size());
  for (std::size_t c = 0; c < cliques.size(); ++c) {
    bandwidth[c] = CliqueBandwidth(set, cliques[c], spec);
  }

  KernelMatrix out;
  out.values.setZero(m, m);
  out.gradients.assign(static_cast<std::size_t>(m) * m,
                       ParamSequence::Zero(horizon, dim));
  for (int i = 0; i < m; ++i) {
    out.values(i, i) = static_cast<double>(cliques.size());
    for (int j = i + 1; j < m; ++j) {
      const ParamSequence& ti = set.particles[i];
      const ParamSequence& tj = set.particles[j];
      double k = 0.0;
      ParamSequence& g_ij = out.gradients[static_cast<std::size_t>(i) * m + j];
      for (std::size_t c = 0; c < cliques.size(); ++c) {
        const auto r0 = cliques[c].first_row;
        const auto nr = cliques[c].num_rows;
        const auto diff = tj.middleRows(r0, nr) - ti.middleRows(r0, nr);
        const double kc = std::exp(-diff.squaredNorm() / bandwidth[c]);
        k += kc;
        g_ij.middleRows(r0, nr) += (-2.0 / bandwidth[c] * kc) * diff;
      }
      out.values(i, j) = k;
      out.values(j, i) = k;
      out.gradients[static_cast<std::size_t>(j) * m + i] = -g_ij;
    }
  }
  return out;
}

std::vector<ParamSequence> svgd_direction(
    const ParticleSet& set, const std::vector<ParamSequence>& log_post_grads,
    const KernelSpec& spec) {
  CheckShapes(set, log_post_grads, "svgd_direction");
  const int m = set.size();
  if (m == 1) return log_post_grads;

  const KernelMatrix km = kernel_matrix(set, spec);
  std::vector<ParamSequence> phi(m);
  for (int i = 0; i < m; ++i) {
    ParamSequence acc = ParamSequence::Zero(set.horizon(), set.control_dim());
    for (int j = 0; j < m; ++j) {
      acc += km.values(j, i) * log_post_grads[j] + km.grad(i, j);
    }
    phi[i] = acc / static_cast<double>(m);
  }
  return phi;
}

ParticleSet svgd_step(const ParticleSet& set,
                      const std::vector<ParamSequence>& directions,
                      double step_size) {
  if (!(step_size >= 0.0)) {
    throw std::invalid_argument("svgd_step: step size must be >= 0");
  }
  CheckShapes(set, directions, "svgd_step");
  ParticleSet out = set;
  for (std::size_t i = 0; i < out.particles.size(); ++i) {
    out.particles[i] += step_size * directions[i];
  }
  return out;
}

void clip_gradient(ParamSequence& gradient, double limit) {
  if (limit <= 0.0) return;
  gradient = gradient.cwiseMax(-limit).cwiseMin(limit);
}

double min_pairwise_distance(const ParticleSet& set) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < set.size(); ++i) {
    for (int j = i + 1; j < set.size(); ++j) {
      best = std::min(best, (set.particles[i] - set.particles[j]).norm());
    }
  }
  return best;
}

}  // namespace svmpc
