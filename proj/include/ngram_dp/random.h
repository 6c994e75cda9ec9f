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

#ifndef NGRAM_DP_RANDOM_H_
#define NGRAM_DP_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace ngram_dp {

// Derives an independent child seed from a root seed, a purpose label and an
// index. Stable across runs and platforms (FNV-1a over the label, mixed with
// SplitMix64), so the same (root, label, index) always names the same stream.
uint64_t DeriveSeed(uint64_t root, std::string_view label, uint64_t index = 0);

// Seeded source of the noise distributions used by the mechanisms. Not
// thread-safe; give each concurrent task its own instance from DeriveSeed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1).
  double Uniform();

  // Zero-mean Laplace with scale b (variance 2b^2), by inverse CDF.
  double Laplace(double scale);

  // Zero-mean normal with the given standard deviation.
  double Gaussian(double stddev);

  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

enum class NoiseKind { kLaplace, kGaussian };

// `dims` i.i.d. draws. For Laplace `scale` is b; for Gaussian it is sigma.
// scale == 0 yields zeros; negative or non-finite scale is an error.
absl::StatusOr<std::vector<double>> SampleNoise(NoiseKind kind, double scale,
                                                size_t dims, uint64_t seed);

}  // namespace ngram_dp

#endif  // NGRAM_DP_RANDOM_H_
