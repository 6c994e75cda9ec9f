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

// Utility and attack metrics over released distributions. All logs are
// natural.

#ifndef NGRAM_DP_EVAL_H_
#define NGRAM_DP_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ngram_dp/counts.h"
#include "ngram_dp/mechanisms.h"
#include "ngram_dp/vocabulary.h"

namespace ngram_dp {

// KL(p || q) = sum_i p_i ln(p_i / q_i). Entries with p_i = 0 contribute 0;
// q_i = 0 where p_i > 0 is an error.
absl::StatusOr<double> KlDivergence(std::span<const double> p,
                                    std::span<const double> q);

// counts / ||counts||_1. Fails on an all-zero or negative vector.
absl::StatusOr<std::vector<double>> EmpiricalDistribution(
    std::span<const int64_t> counts);

// Non-private reference model: the raw private totals normalized with the
// same floor as the thresholded mechanisms.
ReleasedDistribution PrivateBaseline(const CountsDatabase& db);

// Keeps the sentences that produce at least one n-gram and whose n-grams are
// all in the vocabulary. Run once before scoring so that every model is
// evaluated on the same positions.
std::vector<std::string> FilterCorpus(const Vocabulary& vocabulary,
                                      std::span<const std::string> sentences);

// exp(-(1/M) sum ln P(w_n | w_1..w_{n-1})) over the M n-gram positions of
// `sentences`, with P(w_n | ctx) = theta(ctx, w_n) / sum_w theta(ctx, w).
// An n-gram outside the vocabulary, or a context with no mass, is an error
// that names the n-gram.
absl::StatusOr<double> ConditionalPerplexity(
    const Vocabulary& vocabulary, std::span<const double> theta,
    std::span<const std::string> sentences);

// Maps (database, epsilon, seed) to a released distribution.
using ReleaseFn = std::function<absl::StatusOr<std::vector<double>>(
    const CountsDatabase&, double, uint64_t)>;

struct AttackReport {
  std::string mechanism;
  std::string removed_user_id;
  size_t trials = 0;
  std::vector<double> epsilons;
  std::vector<double> probabilities;
};

// Index of the user with the largest l1 count (smallest id on ties). Fails
// on an empty database or when that user has no counts.
absl::StatusOr<size_t> MostContributingUser(const CountsDatabase& db);

// For each epsilon, runs `release` `trials` times on D and on D without the
// most contributing user u (fresh seeds per trial and side) and reports the
// fraction of trials with KL(p_u || theta_D) < KL(p_u || theta_{D-u}), where
// p_u is u's own normalized counts.
absl::StatusOr<AttackReport> MembershipInference(
    const CountsDatabase& db, std::string mechanism, const ReleaseFn& release,
    std::span<const double> epsilons, size_t trials, uint64_t seed);

// max(alpha + Laplace(scale), 0) elementwise.
absl::StatusOr<std::vector<double>> DegradePublic(std::span<const double> alpha,
                                                  double noise_scale,
                                                  uint64_t seed);

}  // namespace ngram_dp

#endif  // NGRAM_DP_EVAL_H_
