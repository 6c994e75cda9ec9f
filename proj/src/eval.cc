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

#include "ngram_dp/eval.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ngram_dp/kernels.h"
#include "ngram_dp/random.h"

namespace ngram_dp {
namespace {

std::string ContextOf(std::string_view ngram) {
  const size_t cut = ngram.rfind(' ');
  return cut == std::string_view::npos ? std::string()
                                       : std::string(ngram.substr(0, cut));
}

}  // namespace

absl::StatusOr<double> KlDivergence(std::span<const double> p,
                                    std::span<const double> q) {
  if (p.size() != q.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "KL needs equal lengths, got %d and %d", p.size(), q.size()));
  }
  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (!(q[i] > 0.0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "KL is infinite: q[%d] = %g where p[%d] = %g", i, q[i], i, p[i]));
    }
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(kl, 0.0);
}

absl::StatusOr<std::vector<double>> EmpiricalDistribution(
    std::span<const int64_t> counts) {
  int64_t total = 0;
  for (int64_t c : counts) {
    if (c < 0) return absl::InvalidArgumentError("counts must be >= 0");
    total += c;
  }
  if (total == 0) {
    return absl::InvalidArgumentError(
        "cannot normalize an all-zero count vector");
  }
  std::vector<double> p(counts.size());
  const double inv = 1.0 / static_cast<double>(total);
  for (size_t i = 0; i < counts.size(); ++i) {
    p[i] = static_cast<double>(counts[i]) * inv;
  }
  return p;
}

ReleasedDistribution PrivateBaseline(const CountsDatabase& db) {
  const std::vector<double> totals(db.totals().begin(), db.totals().end());
  ReleasedDistribution release;
  release.mechanism = "private";
  release.params = {
      {"floor", 1.0 / (static_cast<double>(db.vocab_size()) * kFloorDivisor)}};
  release.theta = NormalizeWithFloor(totals);
  return release;
}

std::vector<std::string> FilterCorpus(const Vocabulary& vocabulary,
                                      std::span<const std::string> sentences) {
  std::vector<std::string> kept;
  for (const std::string& sentence : sentences) {
    const NgramCounts ngrams = ExtractNgrams(sentence, vocabulary.order());
    if (ngrams.empty()) continue;
    bool covered = true;
    for (const auto& [ngram, count] : ngrams) {
      if (!vocabulary.Find(ngram).has_value()) {
        covered = false;
        break;
      }
    }
    if (covered) kept.push_back(sentence);
  }
  return kept;
}

absl::StatusOr<double> ConditionalPerplexity(
    const Vocabulary& vocabulary, std::span<const double> theta,
    std::span<const std::string> sentences) {
  if (theta.size() != vocabulary.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("theta has %d entries but the vocabulary has %d",
                        theta.size(), vocabulary.size()));
  }
  absl::flat_hash_map<std::string, double> context_mass;
  for (size_t i = 0; i < vocabulary.size(); ++i) {
    context_mass[ContextOf(vocabulary.entry(i))] += theta[i];
  }
  double log_likelihood = 0.0;
  int64_t positions = 0;
  for (const std::string& sentence : sentences) {
    for (const auto& [ngram, count] :
         ExtractNgrams(sentence, vocabulary.order())) {
      std::optional<uint32_t> index = vocabulary.Find(ngram);
      if (!index.has_value()) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "n-gram \"%s\" is not in the vocabulary; filter the corpus first",
            ngram));
      }
      auto it = context_mass.find(ContextOf(ngram));
      const double p = theta[*index];
      if (it == context_mass.end() || !(it->second > 0.0) || !(p > 0.0)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("n-gram \"%s\" has zero probability", ngram));
      }
      log_likelihood += static_cast<double>(count) * std::log(p / it->second);
      positions += count;
    }
  }
  if (positions == 0) {
    return absl::InvalidArgumentError("corpus has no n-gram positions");
  }
  return std::exp(-log_likelihood / static_cast<double>(positions));
}

absl::StatusOr<size_t> MostContributingUser(const CountsDatabase& db) {
  if (db.num_users() == 0) {
    return absl::FailedPreconditionError("database has no users");
  }
  size_t best = 0;
  int64_t best_total = db.user(0).Total();
  for (size_t u = 1; u < db.num_users(); ++u) {
    const int64_t total = db.user(u).Total();
    if (total > best_total ||
        (total == best_total && db.user(u).user_id < db.user(best).user_id)) {
      best = u;
      best_total = total;
    }
  }
  if (best_total == 0) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "most contributing user \"%s\" has no counts", db.user(best).user_id));
  }
  return best;
}

absl::StatusOr<AttackReport> MembershipInference(
    const CountsDatabase& db, std::string mechanism, const ReleaseFn& release,
    std::span<const double> epsilons, size_t trials, uint64_t seed) {
  if (trials == 0) {
    return absl::InvalidArgumentError("attack needs at least one trial");
  }
  absl::StatusOr<size_t> target = MostContributingUser(db);
  if (!target.ok()) return target.status();
  const UserContribution& user = db.user(*target);
  absl::StatusOr<CountsDatabase> without = db.WithoutUser(user.user_id);
  if (!without.ok()) return without.status();
  absl::StatusOr<std::vector<double>> p_user =
      EmpiricalDistribution(user.ToDense(db.vocab_size()));
  if (!p_user.ok()) return p_user.status();

  AttackReport report;
  report.mechanism = std::move(mechanism);
  report.removed_user_id = user.user_id;
  report.trials = trials;
  report.epsilons.assign(epsilons.begin(), epsilons.end());
  for (size_t e = 0; e < epsilons.size(); ++e) {
    size_t hits = 0;
    for (size_t t = 0; t < trials; ++t) {
      const uint64_t index = e * trials + t;
      absl::StatusOr<std::vector<double>> with_user =
          release(db, epsilons[e], DeriveSeed(seed, "attack-with", index));
      if (!with_user.ok()) return with_user.status();
      absl::StatusOr<std::vector<double>> without_user = release(
          *without, epsilons[e], DeriveSeed(seed, "attack-without", index));
      if (!without_user.ok()) return without_user.status();
      absl::StatusOr<double> kl_with = KlDivergence(*p_user, *with_user);
      if (!kl_with.ok()) return kl_with.status();
      absl::StatusOr<double> kl_without = KlDivergence(*p_user, *without_user);
      if (!kl_without.ok()) return kl_without.status();
      if (*kl_with < *kl_without) ++hits;
    }
    report.probabilities.push_back(static_cast<double>(hits) /
                                   static_cast<double>(trials));
  }
  return report;
}

absl::StatusOr<std::vector<double>> DegradePublic(std::span<const double> alpha,
                                                  double noise_scale,
                                                  uint64_t seed) {
  absl::StatusOr<std::vector<double>> noise =
      SampleNoise(NoiseKind::kLaplace, noise_scale, alpha.size(),
                  DeriveSeed(seed, "degrade-public"));
  if (!noise.ok()) return noise.status();
  std::vector<double> out(alpha.size());
  kernels::AddRelu(alpha, *noise, out);
  return out;
}

}  // namespace ngram_dp
