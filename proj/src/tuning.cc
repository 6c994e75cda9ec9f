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

#include "ngram_dp/tuning.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_format.h"
#include "ngram_dp/kernels.h"
#include "ngram_dp/random.h"
#include "ngram_dp/transforms.h"

namespace ngram_dp {

absl::Status HyperGrid::Validate() const {
  if (candidates.empty()) {
    return absl::InvalidArgumentError("hyperparameter grid is empty");
  }
  for (size_t k = 0; k < candidates.size(); ++k) {
    const HyperCandidate& c = candidates[k];
    if (!(c.s > 0.0) || !std::isfinite(c.s)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("grid[%d].S must be finite and > 0, got %g", k, c.s));
    }
    if (!(c.rho > 0.0 && c.rho <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("grid[%d].rho must lie in (0, 1], got %g", k, c.rho));
    }
  }
  return absl::OkStatus();
}

HyperGrid HyperGrid::Product(std::span<const double> s_values,
                             std::span<const double> rho_values) {
  HyperGrid grid;
  grid.candidates.reserve(s_values.size() * rho_values.size());
  for (double s : s_values) {
    for (double rho : rho_values) grid.candidates.push_back({s, rho});
  }
  return grid;
}

HyperGrid DefaultGrid() {
  constexpr int kPoints = 8;
  std::vector<double> s_values(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    s_values[i] = std::pow(10.0, -3.0 + 7.0 * i / (kPoints - 1));
  }
  const double rho_values[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  return HyperGrid::Product(s_values, rho_values);
}

void PrivacyLedger::Charge(std::string mechanism, double epsilon,
                           double delta) {
  entries_.push_back({std::move(mechanism), epsilon, delta});
  total_.epsilon += epsilon;
  total_.delta += delta;
}

absl::StatusOr<PrivacyTotal> ComposePrivacy(const PrivacyLedger& ledger) {
  if (ledger.empty()) {
    return absl::FailedPreconditionError("privacy ledger is empty");
  }
  PrivacyTotal total;
  for (const LedgerEntry& e : ledger.entries()) {
    total.epsilon += e.epsilon;
    total.delta += e.delta;
  }
  return total;
}

absl::StatusOr<double> CrossEntropyScore(std::span<const double> counts,
                                         std::span<const double> mu) {
  if (counts.size() != mu.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "counts have %d entries but mu has %d", counts.size(), mu.size()));
  }
  for (double c : counts) {
    if (!(c >= 0.0)) {
      return absl::InvalidArgumentError("counts must be >= 0");
    }
  }
  if (counts.empty()) return 0.0;
  const double lse = LogSumExp(mu);
  return lse * kernels::Sum(counts) - kernels::Dot(counts, mu);
}

absl::StatusOr<double> ScoreSensitivity(std::span<const double> c1,
                                        int64_t c1_max_count,
                                        std::span<const double> mu, double rho,
                                        double gamma, TrainScoreTerm term) {
  if (c1.size() != mu.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "c1 has %d entries but mu has %d", c1.size(), mu.size()));
  }
  if (c1_max_count < 0 || !(rho >= 0.0 && rho <= 1.0) || !(gamma >= 0.0)) {
    return absl::InvalidArgumentError(
        "score sensitivity needs C1 >= 0, rho in [0, 1] and gamma >= 0");
  }
  const double sum_sq = kernels::SumSquares(c1);
  double gradient_norm = std::sqrt(sum_sq);
  if (term == TrainScoreTerm::kGradientBound && !c1.empty()) {
    // ||S theta - c||^2 is convex in theta, so its maximum sits at the
    // vertex e_j with the smallest c_j: S^2 + ||c||^2 - 2 S c_j.
    const double total = kernels::Sum(c1);
    const double smallest = *std::min_element(c1.begin(), c1.end());
    gradient_norm = std::sqrt(
        std::max(0.0, total * total + sum_sq - 2.0 * total * smallest));
  }
  const double train_term = rho * gradient_norm * gamma;
  double validation_term = 0.0;
  if (!mu.empty()) {
    const double lse = LogSumExp(mu);
    double abs_log_prob = 0.0;
    for (double m : mu) abs_log_prob += std::fabs(m - lse);
    validation_term = static_cast<double>(c1_max_count) * abs_log_prob;
  }
  return std::max(train_term, validation_term);
}

absl::StatusOr<size_t> NoisyMinSelect(std::span<const double> scores,
                                      double epsilon1, double score_sensitivity,
                                      uint64_t seed) {
  if (scores.empty()) {
    return absl::InvalidArgumentError("noisy-min needs at least one score");
  }
  if (!(epsilon1 > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon1 must be > 0, got %g", epsilon1));
  }
  if (!(score_sensitivity >= 0.0) || !std::isfinite(score_sensitivity)) {
    return absl::InvalidArgumentError(
        "score sensitivity must be finite and >= 0");
  }
  const double scale = 2.0 * score_sensitivity / epsilon1;
  size_t best = 0;
  double best_value = 0.0;
  for (size_t k = 0; k < scores.size(); ++k) {
    double value = scores[k];
    if (scale > 0.0) {
      Rng rng(DeriveSeed(seed, "noisy-min", k));
      value += rng.Laplace(scale);
    }
    if (k == 0 || value < best_value) {
      best = k;
      best_value = value;
    }
  }
  return best;
}

absl::StatusOr<EndToEndResult> EndToEndDp(const CountsDatabase& db,
                                          std::span<const double> alpha,
                                          const EndToEndParams& params,
                                          uint64_t seed) {
  if (absl::Status s = params.grid.Validate(); !s.ok()) return s;
  if (!(params.epsilon1 > 0.0) || !(params.epsilon2 > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon1 and epsilon2 must be > 0, got %g and %g",
                        params.epsilon1, params.epsilon2));
  }
  if (params.max_count < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "maximum per-user count C must be >= 1, got %d", params.max_count));
  }
  if (alpha.size() != db.vocab_size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "public counts have %d entries but the vocabulary has %d", alpha.size(),
        db.vocab_size()));
  }
  const int64_t c1_max_count = params.validation_max_count >= 1
                                   ? params.validation_max_count
                                   : params.max_count;

  absl::StatusOr<DatasetSplit> split =
      SplitDataset(db, params.train_fraction, DeriveSeed(seed, "split"));
  if (!split.ok()) return split.status();
  const CountsDatabase train =
      split->train.WithContributionLimits(params.max_count);
  const CountsDatabase validation =
      split->validation.WithContributionLimits(c1_max_count);
  const std::vector<double> c1(validation.totals().begin(),
                               validation.totals().end());

  absl::StatusOr<std::vector<double>> xhat = LogNormalize(train.totals());
  if (!xhat.ok()) return xhat.status();
  absl::StatusOr<std::vector<double>> prior = PublicPrior(alpha);
  if (!prior.ok()) return prior.status();

  EndToEndResult result;
  result.candidates.reserve(params.grid.size());
  std::vector<double> scores;
  scores.reserve(params.grid.size());
  for (size_t k = 0; k < params.grid.size(); ++k) {
    const HyperCandidate& hc = params.grid.candidates[k];
    BayesianParams bp{params.epsilon2,  params.delta, hc.s,
                      params.max_count, hc.rho,       params.method};
    absl::StatusOr<GaussianPosterior> posterior =
        ComputeGaussianPosterior(train, *xhat, *prior, bp);
    if (!posterior.ok()) return posterior.status();
    absl::StatusOr<double> score = CrossEntropyScore(c1, posterior->mean);
    if (!score.ok()) return score.status();
    absl::StatusOr<double> dq =
        ScoreSensitivity(c1, c1_max_count, posterior->mean, hc.rho,
                         posterior->sensitivity.gamma);
    if (!dq.ok()) return dq.status();
    result.score_sensitivity = std::max(result.score_sensitivity, *dq);
    scores.push_back(*score);
    ScoredCandidate scored;
    scored.index = k;
    scored.params = hc;
    scored.score = *score;
    scored.score_sensitivity = *dq;
    scored.posterior = *std::move(posterior);
    result.candidates.push_back(std::move(scored));
  }

  absl::StatusOr<size_t> selected =
      NoisyMinSelect(scores, params.epsilon1, result.score_sensitivity, seed);
  if (!selected.ok()) return selected.status();
  result.selected = *selected;
  // Replays the draws of NoisyMinSelect for the report.
  const double scale = 2.0 * result.score_sensitivity / params.epsilon1;
  for (ScoredCandidate& c : result.candidates) {
    c.noisy_score = c.score;
    if (scale > 0.0) {
      Rng rng(DeriveSeed(seed, "noisy-min", c.index));
      c.noisy_score += rng.Laplace(scale);
    }
  }

  result.ledger.Charge("noisy-min", params.epsilon1, 0.0);
  result.ledger.Charge(kBayesianMechanism, params.epsilon2, params.delta);
  const PrivacyTotal spent = result.ledger.total();

  const ScoredCandidate& chosen = result.candidates[result.selected];
  ReleasedDistribution& release = result.release;
  release.mechanism = kEndToEndMechanism;
  release.seed = seed;
  release.epsilon_spent = spent.epsilon;
  release.delta_spent = spent.delta;
  release.noise_scale = chosen.posterior.sigma;
  release.sensitivity = chosen.posterior.sensitivity.gamma;
  release.gaussian_extrapolated = params.epsilon2 >= 1.0;
  release.params = {
      {"S", chosen.params.s},
      {"C", static_cast<double>(params.max_count)},
      {"C1", static_cast<double>(c1_max_count)},
      {"rho", chosen.params.rho},
      {"epsilon1", params.epsilon1},
      {"epsilon2", params.epsilon2},
      {"delta", params.delta},
      {"selected", static_cast<double>(result.selected)},
      {"train_fraction", params.train_fraction},
      {"brute_force",
       params.method == SensitivityMethod::kBruteForce ? 1.0 : 0.0}};
  release.theta = SamplePosterior(chosen.posterior, seed);
  return result;
}

}  // namespace ngram_dp
