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

#include "ngram_dp/transforms.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace ngram_dp {
namespace {

using Vd = std::vector<double>;

using ::testing::DoubleNear;
using ::testing::Each;
using ::testing::ElementsAre;

TEST(LogNormalizeTest, ZerosStayZero) {
  absl::StatusOr<std::vector<double>> x =
      LogNormalize(std::vector<int64_t>{0, 0, 0});
  ASSERT_TRUE(x.ok());
  EXPECT_THAT(*x, Each(DoubleNear(0.0, 1e-15)));
}

TEST(LogNormalizeTest, HandExample) {
  absl::StatusOr<std::vector<double>> x =
      LogNormalize(std::vector<int64_t>{3, 1, 0});
  ASSERT_TRUE(x.ok());
  EXPECT_THAT(*x,
              ElementsAre(DoubleNear(0.693147, 1e-6), DoubleNear(0.0, 1e-12),
                          DoubleNear(-0.693147, 1e-6)));
}

TEST(LogNormalizeTest, UniformCountsCancel) {
  for (int64_t k : {1, 7, 1000000}) {
    absl::StatusOr<std::vector<double>> x =
        LogNormalize(std::vector<int64_t>(5, k));
    ASSERT_TRUE(x.ok());
    EXPECT_THAT(*x, Each(DoubleNear(0.0, 1e-12)));
  }
}

TEST(LogNormalizeTest, RejectsEmptyAndNegative) {
  EXPECT_FALSE(LogNormalize(std::vector<double>{}).ok());
  EXPECT_FALSE(LogNormalize(std::vector<double>{1.0, -1.0}).ok());
  EXPECT_FALSE(
      LogNormalize(std::vector<double>{std::numeric_limits<double>::infinity()})
          .ok());
}

TEST(LogNormalizeTest, MatchesDirectEvaluationAndIsCentered) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int64_t> value(0, 100000);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int64_t> c(1 + trial % 37);
    for (int64_t& v : c) v = value(rng);
    absl::StatusOr<std::vector<double>> x = LogNormalize(c);
    ASSERT_TRUE(x.ok());
    const std::vector<double> oracle = testing::NaiveXhat(c);
    double sum = 0.0;
    for (size_t i = 0; i < c.size(); ++i) {
      EXPECT_NEAR((*x)[i], oracle[i], 1e-12);
      sum += (*x)[i];
    }
    EXPECT_NEAR(sum, 0.0, 1e-10);
  }
}

TEST(PublicPriorTest, HandExample) {
  absl::StatusOr<std::vector<double>> mu = PublicPrior(Vd{9.0, 0.0});
  ASSERT_TRUE(mu.ok());
  EXPECT_THAT(*mu, ElementsAre(DoubleNear(1.151293, 1e-6),
                               DoubleNear(-1.151293, 1e-6)));
}

TEST(PublicPriorTest, UniformIsZero) {
  absl::StatusOr<std::vector<double>> mu = PublicPrior(Vd{2.5, 2.5, 2.5});
  ASSERT_TRUE(mu.ok());
  EXPECT_THAT(*mu, Each(DoubleNear(0.0, 1e-15)));
}

TEST(DecayWeightTest, Examples) {
  EXPECT_DOUBLE_EQ(DecayWeight(5, 0.1, 1), 0.5);
  EXPECT_DOUBLE_EQ(DecayWeight(0, 0.1, 1), 0.0);
  EXPECT_DOUBLE_EQ(DecayWeight(10, 0.1, 1), 1.0);
  EXPECT_DOUBLE_EQ(DecayWeight(1000, 0.1, 1), 1.0);
  EXPECT_DOUBLE_EQ(DecayWeight(3, 1.0, 10), 0.3);
}

TEST(DecayWeightsTest, RejectsBadParameters) {
  const std::vector<int64_t> n = {1, 2};
  EXPECT_FALSE(DecayWeights(n, 0.0, 1).ok());
  EXPECT_FALSE(DecayWeights(n, -1.0, 1).ok());
  EXPECT_FALSE(DecayWeights(n, 1.0, 0).ok());
  EXPECT_FALSE(DecayWeights(std::vector<int64_t>{-1}, 1.0, 1).ok());
}

TEST(DecayWeightsTest, MonotoneAndBounded) {
  for (double s : {0.001, 0.3, 2.0, 1e4}) {
    double previous = 0.0;
    for (int64_t n = 0; n < 200; ++n) {
      const double w = DecayWeight(n, s, 3);
      EXPECT_GE(w, previous);
      EXPECT_GE(w, 0.0);
      EXPECT_LE(w, 1.0);
      previous = w;
    }
  }
}

TEST(PosteriorMeanTest, Limits) {
  const std::vector<double> xhat = {1.0, -1.0};
  const std::vector<double> prior = {0.3, -0.3};
  const std::vector<double> ones = {1.0, 1.0};
  absl::StatusOr<std::vector<double>> public_only =
      PosteriorMean(xhat, prior, ones, 0.0);
  ASSERT_TRUE(public_only.ok());
  EXPECT_THAT(*public_only, ElementsAre(0.3, -0.3));
  absl::StatusOr<std::vector<double>> private_only =
      PosteriorMean(xhat, prior, ones, 1.0);
  ASSERT_TRUE(private_only.ok());
  EXPECT_THAT(*private_only, ElementsAre(1.0, -1.0));
}

TEST(PosteriorMeanTest, HandExample) {
  absl::StatusOr<std::vector<double>> mu =
      PosteriorMean(Vd{1.0, -1.0}, Vd{0.0, 0.0}, Vd{1.0, 1.0}, 0.5);
  ASSERT_TRUE(mu.ok());
  EXPECT_THAT(*mu, ElementsAre(0.5, -0.5));
}

TEST(PosteriorMeanTest, WeightsScaleThePrivateTerm) {
  absl::StatusOr<std::vector<double>> mu =
      PosteriorMean(Vd{2.0, 2.0}, Vd{1.0, 1.0}, Vd{0.25, 0.0}, 0.5);
  ASSERT_TRUE(mu.ok());
  EXPECT_THAT(*mu,
              ElementsAre(DoubleNear(0.75, 1e-15), DoubleNear(0.5, 1e-15)));
}

TEST(PosteriorMeanTest, RejectsMismatchAndBadRho) {
  EXPECT_FALSE(PosteriorMean(Vd{1.0}, Vd{1.0, 2.0}, Vd{1.0}, 0.5).ok());
  EXPECT_FALSE(PosteriorMean(Vd{1.0}, Vd{1.0}, Vd{1.0}, 1.5).ok());
  EXPECT_FALSE(PosteriorMean(Vd{1.0}, Vd{1.0}, Vd{1.0}, -0.1).ok());
}

TEST(SoftmaxTest, Examples) {
  EXPECT_THAT(Softmax(std::vector<double>{0.0, 0.0}), ElementsAre(0.5, 0.5));
  EXPECT_THAT(Softmax(std::vector<double>{1000.0, 1000.0}),
              ElementsAre(0.5, 0.5));
  EXPECT_THAT(Softmax(std::vector<double>{std::log(1.0), std::log(3.0)}),
              ElementsAre(DoubleNear(0.25, 1e-15), DoubleNear(0.75, 1e-15)));
}

TEST(SoftmaxTest, ExtremeInputsStayPositiveAndNormalized) {
  const std::vector<double> h = {-2000.0, 0.0, 700.0, -1e6};
  const std::vector<double> theta = Softmax(h);
  double sum = 0.0;
  for (double t : theta) {
    EXPECT_GT(t, 0.0);
    sum += t;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(SoftmaxTest, SoftmaxOfLogNormalizeIsAddOneSmoothing) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int64_t> value(0, 50);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int64_t> c(2 + trial % 11);
    double total = 0.0;
    for (int64_t& v : c) {
      v = value(rng);
      total += static_cast<double>(v + 1);
    }
    absl::StatusOr<std::vector<double>> x = LogNormalize(c);
    ASSERT_TRUE(x.ok());
    const std::vector<double> theta = Softmax(*x);
    for (size_t i = 0; i < c.size(); ++i) {
      EXPECT_NEAR(theta[i], static_cast<double>(c[i] + 1) / total, 1e-14);
    }
  }
}

TEST(LogSumExpTest, StableAndExact) {
  EXPECT_NEAR(LogSumExp(std::vector<double>{0.0, 0.0}), std::log(2.0), 1e-15);
  EXPECT_NEAR(LogSumExp(std::vector<double>{1000.0, 1000.0}),
              1000.0 + std::log(2.0), 1e-12);
  EXPECT_EQ(LogSumExp(std::vector<double>{}),
            -std::numeric_limits<double>::infinity());
}

}  // namespace
}  // namespace ngram_dp
