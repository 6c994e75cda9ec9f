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

// Release mechanisms. Each returns a strictly positive probability vector
// over the vocabulary together with the parameters needed to replay it.

#ifndef NGRAM_DP_MECHANISMS_H_
#define NGRAM_DP_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ngram_dp/counts.h"
#include "ngram_dp/sensitivity.h"

namespace ngram_dp {

inline constexpr char kBayesianMechanism[] = "bayesian";
inline constexpr char kLaplaceMechanism[] = "laplace";
inline constexpr char kModifiedLaplaceMechanism[] = "modified-laplace";
inline constexpr char kKAnonymityMechanism[] = "k-anonymity";
inline constexpr char kPublicMechanism[] = "public";

// Thresholded and suppressed entries are raised to 1 / (|V| * kFloorDivisor)
// before the final normalization.
inline constexpr double kFloorDivisor = 1e6;

struct ReleasedDistribution {
  std::string mechanism;
  uint64_t seed = 0;
  // Budget actually consumed. Empty for mechanisms without a DP guarantee
  // (k-anonymity).
  std::optional<double> epsilon_spent;
  std::optional<double> delta_spent;
  // Sigma of the Gaussian or scale b of the Laplace noise that was added.
  double noise_scale = 0.0;
  std::optional<double> sensitivity;
  // Set when the classical Gaussian calibration is used outside epsilon < 1.
  bool gaussian_extrapolated = false;
  // Mechanism parameters (S, C, rho, epsilon, delta, W, K, floor, ...).
  std::map<std::string, double> params;
  std::vector<double> theta;
};

// sigma_ps = rho * gamma * sqrt(2 ln(1.25 / delta)) / epsilon.
absl::StatusOr<double> GaussianSigma(double gamma, double rho, double epsilon,
                                     double delta);

struct BayesianParams {
  double epsilon = 0.1;
  double delta = 1e-5;
  double s = 1.0;
  int64_t max_count = 1;
  double rho = 0.5;
  SensitivityMethod method = SensitivityMethod::kBruteForce;
};

// Noise-free part of the Bayesian release: posterior mean and calibrated
// sigma for one (S, rho).
struct GaussianPosterior {
  std::vector<double> mean;
  double sigma = 0.0;
  SensitivityEstimate sensitivity;
};

// `db` must already be clamped to params.max_count; `prior` is
// PublicPrior(alpha) and `xhat` is LogNormalize(db.totals()).
absl::StatusOr<GaussianPosterior> ComputeGaussianPosterior(
    const CountsDatabase& db, std::span<const double> xhat,
    std::span<const double> prior, const BayesianParams& params);

// theta = softmax(h), h ~ N(mean, sigma^2 I), noise drawn from the stream
// DeriveSeed(seed, "gaussian-release").
std::vector<double> SamplePosterior(const GaussianPosterior& posterior,
                                    uint64_t seed);

// Clamp to C, aggregate, weight, calibrate, blend with the prior, sample and
// softmax. rho in (0, 1], delta in (0, 1), epsilon > 0.
absl::StatusOr<ReleasedDistribution> BayesianDp(const CountsDatabase& db,
                                                std::span<const double> alpha,
                                                const BayesianParams& params,
                                                uint64_t seed);

// Each user contributes at most `max_total` counts (l1-sensitivity W); adds
// Laplace(W / epsilon) noise to the totals, thresholds at zero and
// normalizes.
absl::StatusOr<ReleasedDistribution> LaplaceBaseline(const CountsDatabase& db,
                                                     int64_t max_total,
                                                     double epsilon,
                                                     uint64_t seed);

// Deterministic part of the public-prior Laplace baseline:
//   g = sum_n (dc^n / c) . (dc^n / |dc^n|_1 - alpha / |alpha|_1)
// (0/0 taken as 0) and its brute-force l1-sensitivity over users.
struct ModifiedLaplaceAggregate {
  std::vector<double> aggregate;
  std::vector<double> normalized_alpha;
  double l1_sensitivity = 0.0;
};

absl::StatusOr<ModifiedLaplaceAggregate> ComputeModifiedLaplaceAggregate(
    const CountsDatabase& db, std::span<const double> alpha);

// normalize(max(g + Laplace(l1 / epsilon) + alpha / |alpha|_1, 0)).
absl::StatusOr<ReleasedDistribution> ModifiedLaplaceBaseline(
    const CountsDatabase& db, std::span<const double> alpha, double epsilon,
    uint64_t seed);

// Suppresses n-grams with fewer than k distinct users and renormalizes the
// rest. Not differentially private.
absl::StatusOr<ReleasedDistribution> KAnonymize(const CountsDatabase& db,
                                                int64_t k);

// softmax(PublicPrior(alpha)); uses no private data.
absl::StatusOr<ReleasedDistribution> PublicBaseline(
    std::span<const double> alpha);

// Divides by the sum, raises zero entries to 1 / (|V| * kFloorDivisor) and
// renormalizes. All-zero (or empty-sum) input becomes uniform. Entries must
// be >= 0.
std::vector<double> NormalizeWithFloor(std::span<const double> values);

}  // namespace ngram_dp

#endif  // NGRAM_DP_MECHANISMS_H_
