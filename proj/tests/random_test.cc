//
// Copyright 2026 The ngram-dp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "ngram_dp/random.h"

#include <cmath>
#include <set>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace ngram_dp {
namespace {

using ::testing::Each;

TEST(DeriveSeedTest, DistinctPurposesAndIndicesGiveDistinctSeeds) {
  std::set<uint64_t> seen;
  for (const char* label : {"gaussian-release", "laplace-release", "split"}) {
    for (uint64_t i = 0; i < 100; ++i) seen.insert(DeriveSeed(1, label, i));
  }
  EXPECT_EQ(seen.size(), 300u);
  EXPECT_NE(DeriveSeed(1, "split"), DeriveSeed(2, "split"));
  EXPECT_EQ(DeriveSeed(1, "split", 3), DeriveSeed(1, "split", 3));
}

TEST(RngTest, UniformIsInsideTheOpenInterval) {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RngTest, UniformIntCoversTheRange) {
  Rng rng(2);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[rng.UniformInt(7)];
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(SampleNoiseTest, ZeroScaleIsZero) {
  absl::StatusOr<std::vector<double>> noise =
      SampleNoise(NoiseKind::kLaplace, 0.0, 10, 3);
  ASSERT_TRUE(noise.ok());
  EXPECT_THAT(*noise, Each(0.0));
}

TEST(SampleNoiseTest, NegativeScaleIsAnError) {
  EXPECT_FALSE(SampleNoise(NoiseKind::kGaussian, -1.0, 10, 3).ok());
  EXPECT_FALSE(SampleNoise(NoiseKind::kLaplace, -1.0, 10, 3).ok());
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments ComputeMoments(const std::vector<double>& v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.variance += (x - m.mean) * (x - m.mean);
  m.variance /= static_cast<double>(v.size() - 1);
  return m;
}

TEST(SampleNoiseTest, LaplaceMoments) {
  absl::StatusOr<std::vector<double>> noise =
      SampleNoise(NoiseKind::kLaplace, 2.0, 1000000, 17);
  ASSERT_TRUE(noise.ok());
  const Moments m = ComputeMoments(*noise);
  EXPECT_GE(m.mean, -0.02);
  EXPECT_LE(m.mean, 0.02);
  EXPECT_GE(m.variance, 7.8);
  EXPECT_LE(m.variance, 8.2);
}

TEST(SampleNoiseTest, GaussianMoments) {
  absl::StatusOr<std::vector<double>> noise =
      SampleNoise(NoiseKind::kGaussian, 3.0, 1000000, 17);
  ASSERT_TRUE(noise.ok());
  const Moments m = ComputeMoments(*noise);
  EXPECT_NEAR(m.mean, 0.0, 0.015);
  EXPECT_NEAR(m.variance, 9.0, 0.09);
}

TEST(SampleNoiseTest, SameSeedSameDraws) {
  EXPECT_EQ(*SampleNoise(NoiseKind::kGaussian, 1.0, 50, 99),
            *SampleNoise(NoiseKind::kGaussian, 1.0, 50, 99));
  EXPECT_NE(*SampleNoise(NoiseKind::kGaussian, 1.0, 50, 99),
            *SampleNoise(NoiseKind::kGaussian, 1.0, 50, 100));
}

}  // namespace
}  // namespace ngram_dp
