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

#ifndef SVMPC_RNG_H_
#define SVMPC_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace svmpc {

// SplitMix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives the seed of an independent stream from a root seed and a key path.
// The result depends only on (root, keys), never on evaluation order, so
// parallel consumers reproduce sequential results.
std::uint64_t DeriveSeed(std::uint64_t root,
                         std::initializer_list<std::uint64_t> keys);

// Purpose tags keep streams drawn at the same (timestep, particle) disjoint.
enum class StreamPurpose : std::uint64_t {
  kGradient = 1,
  kWeighting = 2,
  kExecution = 3,
  kInitialization = 4,
  kSelection = 5,
  kPlanner = 6,
};

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  double Normal() { return normal_(engine_); }
  double Uniform() { return uniform_(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Addresses one family of streams: (root, trial, timestep, iteration,
// particle, purpose). Individual samples get their own stream via Stream(s).
struct StreamKey {
  std::uint64_t root = 0;
  std::uint64_t trial = 0;
  std::uint64_t timestep = 0;
  std::uint64_t iteration = 0;
  std::uint64_t particle = 0;
  StreamPurpose purpose = StreamPurpose::kGradient;

  RngStream Stream(std::uint64_t sample) const;
};

}  // namespace svmpc

#endif  // SVMPC_RNG_H_
