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

#ifndef SVMPC_SVGD_H_
#define SVMPC_SVGD_H_

#include <vector>

#include <Eigen/Dense>

namespace svmpc {

// Decision variable: H rows (timesteps) by d columns (control dimensions).
using ParamSequence = Eigen::MatrixXd;

// Weighted particle approximation of a posterior over ParamSequences.
struct ParticleSet {
  std::vector<ParamSequence> particles;
  std::vector<double> weights;

  // Equal weights 1/m.
  static ParticleSet Uniform(std::vector<ParamSequence> particles);

  int size() const { return static_cast<int>(particles.size()); }
  int horizon() const;
  int control_dim() const;

  // Throws std::invalid_argument on empty sets, ragged shapes, non-finite
  // entries or weights that do not sum to one.
  void Validate() const;
};

enum class BandwidthPolicy { kMedianHeuristic, kFixed };

// kFull: one RBF over the flattened H*d vector.
// kFactorized: sum of RBFs over unary cliques (one row each) and pairwise
// cliques (two consecutive rows each), 2H-1 cliques in total.
enum class KernelStructure { kFull, kFactorized };

struct KernelSpec {
  BandwidthPolicy bandwidth = BandwidthPolicy::kMedianHeuristic;
  double fixed_bandwidth = 1.0;
  KernelStructure structure = KernelStructure::kFull;

  void Validate() const;
};

inline constexpr double kMinBandwidth = 1e-8;

struct RbfValue {
  double value = 0.0;
  Eigen::VectorXd grad_a;  // d/da k(a, b)
};

// k(a, b) = exp(-|a - b|^2 / h).
RbfValue rbf_eval(const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b, double h);

// Squared median pairwise Euclidean distance over ln(m), floored at
// kMinBandwidth. Requires at least two points.
double median_bandwidth(const std::vector<Eigen::VectorXd>& points);

struct KernelMatrix {
  Eigen::MatrixXd values;              // K(i, j) = k(theta^i, theta^j)
  std::vector<ParamSequence> gradients;  // row-major m*m

  // grad(i, j) = d/d theta^j k(theta^j, theta^i)
  const ParamSequence& grad(int i, int j) const {
    return gradients[static_cast<std::size_t>(i) * values.rows() + j];
  }
};

KernelMatrix kernel_matrix(const ParticleSet& set, const KernelSpec& spec);

// phi(theta^i) = 1/m sum_j [k(theta^j, theta^i) grad_j + d/d theta^j
// k(theta^j, theta^i)]. With a single particle the input gradient is returned
// unchanged.
std::vector<ParamSequence> svgd_direction(
    const ParticleSet& set, const std::vector<ParamSequence>& log_post_grads,
    const KernelSpec& spec);

// theta^i <- theta^i + step_size * phi(theta^i); weights are preserved.
ParticleSet svgd_step(const ParticleSet& set,
                      const std::vector<ParamSequence>& directions,
                      double step_size);

// Elementwise clamp to [-limit, limit]; limit <= 0 disables clipping.
void clip_gradient(ParamSequence& gradient, double limit);

// Smallest pairwise Frobenius distance; +inf for fewer than two particles.
double min_pairwise_distance(const ParticleSet& set);

}  // namespace svmpc

#endif  // SVMPC_SVGD_H_
