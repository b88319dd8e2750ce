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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

namespace svmpc {
namespace {

TEST(DeriveSeed, DependsOnEveryKeyAndItsPosition) {
  const std::uint64_t base = DeriveSeed(7, {1, 2, 3});
  EXPECT_EQ(base, DeriveSeed(7, {1, 2, 3}));
  EXPECT_NE(base, DeriveSeed(8, {1, 2, 3}));
  EXPECT_NE(base, DeriveSeed(7, {1, 2, 4}));
  EXPECT_NE(base, DeriveSeed(7, {2, 1, 3}));
  EXPECT_NE(base, DeriveSeed(7, {1, 2}));
}

TEST(StreamKey, DistinctFieldsGiveDistinctStreams) {
  StreamKey key;
  key.root = 11;
  std::set<double> firsts;
  auto draw = [](const StreamKey& k, std::uint64_t s) {
    RngStream r = k.Stream(s);
    return r.Normal();
  };
  firsts.insert(draw(key, 0));
  firsts.insert(draw(key, 1));
  StreamKey k = key;
  k.trial = 1;
  firsts.insert(draw(k, 0));
  k = key;
  k.timestep = 1;
  firsts.insert(draw(k, 0));
  k = key;
  k.iteration = 1;
  firsts.insert(draw(k, 0));
  k = key;
  k.particle = 1;
  firsts.insert(draw(k, 0));
  k = key;
  k.purpose = StreamPurpose::kWeighting;
  firsts.insert(draw(k, 0));
  EXPECT_EQ(firsts.size(), 7u);
}

TEST(StreamKey, ReproducibleRegardlessOfDrawOrder) {
  StreamKey key;
  key.root = 3;
  key.particle = 5;
  RngStream a = key.Stream(2);
  RngStream unrelated = key.Stream(9);
  for (int i = 0; i < 10; ++i) unrelated.Normal();
  RngStream b = key.Stream(2);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.Normal(), b.Normal());
}

TEST(RngStream, StandardNormalMoments) {
  RngStream rng(42);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.Normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  // 5 standard errors
  EXPECT_NEAR(mean, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n - mean * mean, 1.0, 0.02);
}

TEST(RngStream, UniformStaysInUnitInterval) {
  RngStream rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace svmpc
