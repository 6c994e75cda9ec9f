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

// Private selection of (S, rho) by noisy-min over an un-normalized
// cross-entropy score, and the tuned end-to-end release.

#ifndef NGRAM_DP_TUNING_H_
#define NGRAM_DP_TUNING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ngram_dp/counts.h"
#include "ngram_dp/mechanisms.h"
#include "ngram_dp/sensitivity.h"

namespace ngram_dp {

inline constexpr char kEndToEndMechanism[] = "end-to-end";

struct HyperCandidate {
  double s = 1.0;
  double rho = 0.5;

  friend bool operator==(const HyperCandidate&,
                         const HyperCandidate&) = default;
};

struct HyperGrid {
  std::vector<HyperCandidate> candidates;

  size_t size() const { return candidates.size(); }

  // Non-empty, every S finite and > 0, every rho in (0, 1].
  absl::Status Validate() const;

  // Cartesian product, S-major.
  static HyperGrid Product(std::span<const double> s_values,
                           std::span<const double> rho_values);
};

// S log-spaced over [1e-3, 1e4] with 8 points times rho in
// {0.1, 0.3, 0.5, 0.7, 0.9}: 40 candidates.
HyperGrid DefaultGrid();

struct LedgerEntry {
  std::string mechanism;
  double epsilon = 0.0;
  double delta = 0.0;
};

struct PrivacyTotal {
  double epsilon = 0.0;
  double delta = 0.0;
};

class PrivacyLedger {
 public:
  void Charge(std::string mechanism, double epsilon, double delta);

  std::span<const LedgerEntry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  // Running sum of the entries.
  PrivacyTotal total() const { return total_; }

 private:
  std::vector<LedgerEntry> entries_;
  PrivacyTotal total_;
};

// Simple summation of the ledger. Fails on an empty ledger.
absl::StatusOr<PrivacyTotal> ComposePrivacy(const PrivacyLedger& ledger);

// q(c, mu) = -sum_i c_i (mu_i - logsumexp(mu)). c must be >= 0.
absl::StatusOr<double> CrossEntropyScore(std::span<const double> counts,
                                         std::span<const double> mu);

enum class TrainScoreTerm {
  // rho * gamma * max over the simplex of ||(sum c1) theta - c1||_2, the
  // largest gradient norm of q in mu. Always an upper bound.
  kGradientBound,
  // rho * gamma * ||c1||_2. Can undershoot: c1 = [1, 0] has gradient norm
  // sqrt(2) at theta = [0, 1].
  kEuclideanNorm,
};

// |dq| = max(train_term, C1 * sum_i |mu_i - logsumexp(mu)|): the first term
// covers a user of the training set (whose removal moves mu by at most
// rho * gamma), the second a user of the validation set.
absl::StatusOr<double> ScoreSensitivity(
    std::span<const double> c1, int64_t c1_max_count,
    std::span<const double> mu, double rho, double gamma,
    TrainScoreTerm term = TrainScoreTerm::kGradientBound);

// argmin_k (scores[k] + Laplace(2 |dq| / epsilon1)), one independent draw per
// candidate from DeriveSeed(seed, "noisy-min", k). Ties go to the lowest
// index. |dq| = 0 gives the exact argmin.
absl::StatusOr<size_t> NoisyMinSelect(std::span<const double> scores,
                                      double epsilon1, double score_sensitivity,
                                      uint64_t seed);

struct ScoredCandidate {
  size_t index = 0;
  HyperCandidate params;
  double score = 0.0;
  double noisy_score = 0.0;
  double score_sensitivity = 0.0;
  GaussianPosterior posterior;
};

struct EndToEndParams {
  double epsilon1 = 0.1 / 3.0;  // selection
  double epsilon2 = 0.2 / 3.0;  // release
  double delta = 1e-5;
  int64_t max_count = 1;
  // Clamp for the validation counts; defaults to max_count when unset (< 1).
  int64_t validation_max_count = 0;
  double train_fraction = 0.9;
  SensitivityMethod method = SensitivityMethod::kBruteForce;
  HyperGrid grid;
};

struct EndToEndResult {
  ReleasedDistribution release;
  PrivacyLedger ledger;
  std::vector<ScoredCandidate> candidates;
  size_t selected = 0;
  // max over candidates of the per-candidate score sensitivity.
  double score_sensitivity = 0.0;
};

// Splits `db` by user (seed stream "split"), computes the posterior of every
// candidate on the train side at (epsilon2, delta), scores each against the
// clamped validation totals, selects by noisy-min at epsilon1 and samples
// only the selected candidate. The final draw uses the same stream as
// BayesianDp, so a one-candidate grid reproduces BayesianDp on the train
// side. The ledger holds (noisy-min, epsilon1, 0) and (bayesian, epsilon2,
// delta).
absl::StatusOr<EndToEndResult> EndToEndDp(const CountsDatabase& db,
                                          std::span<const double> alpha,
                                          const EndToEndParams& params,
                                          uint64_t seed);

}  // namespace ngram_dp

#endif  // NGRAM_DP_TUNING_H_
