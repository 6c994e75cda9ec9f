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

// Log/softmax-space transforms. Counts are mapped to mean-centred
// log(c + 1) vectors, blended with a public prior, and mapped back to a
// probability distribution with softmax.

#ifndef NGRAM_DP_TRANSFORMS_H_
#define NGRAM_DP_TRANSFORMS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace ngram_dp {

// x_i = log(c_i + 1) - mean_j log(c_j + 1). The result sums to zero up to
// rounding. Empty or negative input is an error.
absl::StatusOr<std::vector<double>> LogNormalize(
    std::span<const double> counts);
absl::StatusOr<std::vector<double>> LogNormalize(
    std::span<const int64_t> counts);

// Prior mean from public counts; the same transform as LogNormalize.
absl::StatusOr<std::vector<double>> PublicPrior(std::span<const double> alpha);

// w(N) = min(1, S * N / C) for a single support value.
double DecayWeight(int64_t support, double s, int64_t max_count);

// Elementwise DecayWeight. S must be positive and C at least 1.
absl::StatusOr<std::vector<double>> DecayWeights(
    std::span<const int64_t> supports, double s, int64_t max_count);

// mu_ps = rho * w . xhat + (1 - rho) * mu_p, with rho in [0, 1].
absl::StatusOr<std::vector<double>> PosteriorMean(std::span<const double> xhat,
                                                  std::span<const double> mu_p,
                                                  std::span<const double> w,
                                                  double rho);

// log sum_j exp(h_j), shifted by max(h).
double LogSumExp(std::span<const double> h);

// exp(h_i) / sum_j exp(h_j), computed after subtracting max(h). Entries that
// underflow are raised to the smallest normal double so every probability is
// strictly positive.
std::vector<double> Softmax(std::span<const double> h);

}  // namespace ngram_dp

#endif  // NGRAM_DP_TRANSFORMS_H_
