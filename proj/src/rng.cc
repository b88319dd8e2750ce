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

#include "svmpc/rng.h"

namespace svmpc {

std::uint64_t DeriveSeed(std::uint64_t root,
                         std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = Mix64(root);
  for (std::uint64_t k : keys) {
    h = Mix64(h ^ Mix64(k + 0x632be59bd9b4e019ULL));
  }
  return h;
}

RngStream StreamKey::Stream(std::uint64_t sample) const {
  return RngStream(DeriveSeed(root, {trial, timestep, iteration, particle,
                                     static_cast<std::uint64_t>(purpose),
                                     sample}));
}

}  // namespace svmpc
