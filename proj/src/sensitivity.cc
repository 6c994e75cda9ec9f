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

#include "ngram_dp/sensitivity.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ngram_dp/kernels.h"
#include "ngram_dp/transforms.h"
#include "string_compat.h"

namespace ngram_dp {

std::string_view SensitivityMethodName(SensitivityMethod method) {
  switch (method) {
    case SensitivityMethod::kBruteForce:
      return "brute-force";
    case SensitivityMethod::kWorstCaseBound:
      return "worst-case-bound";
  }
  return "unknown";
}

absl::StatusOr<SensitivityMethod> ParseSensitivityMethod(
    std::string_view name) {
  if (name == "brute-force") return SensitivityMethod::kBruteForce;
  if (name == "worst-case-bound") return SensitivityMethod::kWorstCaseBound;
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown sensitivity method \"%s\" (expected brute-force or "
      "worst-case-bound)",
      ToAbsl(name)));
}

absl::StatusOr<SensitivityEstimate> BruteForceSensitivity(
    const CountsDatabase& db, double s, int64_t max_count) {
  absl::StatusOr<std::vector<double>> weights =
      DecayWeights(db.supports(), s, max_count);
  if (!weights.ok()) return weights.status();
  const std::vector<double>& w = *weights;

  SensitivityEstimate estimate{0.0, SensitivityMethod::kBruteForce,
                               std::nullopt};
  if (db.num_users() == 0) return estimate;

  const size_t vocab_size = db.vocab_size();
  const double inv_v = 1.0 / static_cast<double>(vocab_size);
  std::span<const int64_t> totals = db.totals();
  std::span<const int64_t> supports = db.supports();

  std::vector<double> log_counts(vocab_size);
  for (size_t i = 0; i < vocab_size; ++i) {
    log_counts[i] = std::log1p(static_cast<double>(totals[i]));
  }
  const double mean = kernels::Sum(log_counts) * inv_v;
  const double weight_sq_total = kernels::SumSquares(w);

  // Removing user n changes log(c_i + 1) only on the user's words; every
  // other coordinate moves by w_i * (mean_-n - mean).
  double best_sq = -1.0;
  size_t best_user = 0;
  for (size_t u = 0; u < db.num_users(); ++u) {
    const UserContribution& user = db.user(u);
    double log_shift = 0.0;
    for (const SparseEntry& e : user.counts) {
      log_shift += std::log1p(static_cast<double>(totals[e.index] - e.count)) -
                   log_counts[e.index];
    }
    const double adjacent_mean = mean + log_shift * inv_v;
    const double mean_shift = adjacent_mean - mean;

    double touched_sq = 0.0;
    double touched_weight_sq = 0.0;
    for (const SparseEntry& e : user.counts) {
      const size_t i = e.index;
      const double adjacent_log =
          std::log1p(static_cast<double>(totals[i] - e.count));
      const double adjacent_w = DecayWeight(supports[i] - 1, s, max_count);
      const double d = w[i] * (log_counts[i] - mean) -
                       adjacent_w * (adjacent_log - adjacent_mean);
      touched_sq += d * d;
      touched_weight_sq += w[i] * w[i];
    }
    const double untouched_weight_sq =
        std::max(0.0, weight_sq_total - touched_weight_sq);
    const double norm_sq =
        touched_sq + mean_shift * mean_shift * untouched_weight_sq;
    if (norm_sq > best_sq) {
      best_sq = norm_sq;
      best_user = u;
    }
  }
  estimate.gamma = std::sqrt(std::max(0.0, best_sq));
  estimate.argmax_user = db.user(best_user).user_id;
  return estimate;
}

absl::StatusOr<std::vector<double>> LipschitzCoeffs(
    std::span<const int64_t> supports, size_t vocab_size) {
  if (vocab_size == 0 || supports.size() > vocab_size) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "vocabulary size %d is smaller than the %d words supplied", vocab_size,
        supports.size()));
  }
  double inverse_total = 0.0;
  for (size_t i = 0; i < supports.size(); ++i) {
    if (supports[i] < 1) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "Lipschitz bound undefined: word %d has zero support", i));
    }
    inverse_total += 1.0 / static_cast<double>(supports[i]);
  }
  const double inv_v = 1.0 / static_cast<double>(vocab_size);
  std::vector<double> lipschitz(supports.size());
  for (size_t i = 0; i < supports.size(); ++i) {
    const double own = 1.0 / static_cast<double>(supports[i]);
    lipschitz[i] = (1.0 - inv_v) * own + (inverse_total - own) * inv_v;
  }
  return lipschitz;
}

absl::StatusOr<SensitivityEstimate> WorstCaseBound(
    std::span<const double> xhat, std::span<const int64_t> supports, double s,
    int64_t max_count, size_t vocab_size, WeightChangeTerm term) {
  if (xhat.size() != supports.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("xhat has %d entries but supports has %d", xhat.size(),
                        supports.size()));
  }
  absl::StatusOr<std::vector<double>> lipschitz =
      LipschitzCoeffs(supports, vocab_size);
  if (!lipschitz.ok()) return lipschitz.status();
  absl::StatusOr<std::vector<double>> w = DecayWeights(supports, s, max_count);
  if (!w.ok()) return w.status();

  const double c = static_cast<double>(max_count);
  std::vector<double> bound(xhat.size());
  for (size_t i = 0; i < xhat.size(); ++i) {
    double weight_change = 0.0;
    if (term == WeightChangeTerm::kExact) {
      weight_change = (*w)[i] - DecayWeight(supports[i] - 1, s, max_count);
    } else if (s * static_cast<double>(supports[i]) <= c) {
      weight_change = s / c;
    }
    bound[i] =
        (*w)[i] * (*lipschitz)[i] * c + weight_change * std::fabs(xhat[i]);
  }
  return SensitivityEstimate{std::sqrt(kernels::SumSquares(bound)),
                             SensitivityMethod::kWorstCaseBound, std::nullopt};
}

absl::StatusOr<SensitivityEstimate> WorstCaseSensitivity(
    const CountsDatabase& db, double s, int64_t max_count,
    WeightChangeTerm term) {
  absl::StatusOr<std::vector<double>> xhat = LogNormalize(db.totals());
  if (!xhat.ok()) return xhat.status();
  std::vector<double> kept_xhat;
  std::vector<int64_t> kept_supports;
  for (size_t i = 0; i < db.vocab_size(); ++i) {
    if (db.supports()[i] > 0) {
      kept_xhat.push_back((*xhat)[i]);
      kept_supports.push_back(db.supports()[i]);
    }
  }
  if (kept_supports.empty()) {
    if (!(s > 0.0) || max_count < 1) {
      return DecayWeights(std::span<const int64_t>(), s, max_count).status();
    }
    return SensitivityEstimate{0.0, SensitivityMethod::kWorstCaseBound,
                               std::nullopt};
  }
  return WorstCaseBound(kept_xhat, kept_supports, s, max_count, db.vocab_size(),
                        term);
}

absl::StatusOr<SensitivityEstimate> EstimateSensitivity(
    const CountsDatabase& db, double s, int64_t max_count,
    SensitivityMethod method) {
  if (method == SensitivityMethod::kBruteForce) {
    return BruteForceSensitivity(db, s, max_count);
  }
  return WorstCaseSensitivity(db, s, max_count);
}

}  // namespace ngram_dp
