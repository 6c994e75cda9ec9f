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

// l2-sensitivity of the weighted private log vector
//
//   f(D) = w(N) . xhat(c),   w(N) = min(1, S N / C),
//
// under user-level adjacency. gamma = max_n ||f(D) - f(D_-n)||_2; the noise
// actually added to the posterior mean is rho * gamma scaled by the Gaussian
// mechanism factor.

#ifndef NGRAM_DP_SENSITIVITY_H_
#define NGRAM_DP_SENSITIVITY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "ngram_dp/counts.h"

namespace ngram_dp {

enum class SensitivityMethod { kBruteForce, kWorstCaseBound };

std::string_view SensitivityMethodName(SensitivityMethod method);
absl::StatusOr<SensitivityMethod> ParseSensitivityMethod(std::string_view name);

struct SensitivityEstimate {
  double gamma = 0.0;
  SensitivityMethod method = SensitivityMethod::kBruteForce;
  // Brute force only: the user whose removal attains gamma (lowest position
  // on ties). Empty for an empty database.
  std::optional<std::string> argmax_user;
};

// Exact scan over users. Per user it touches only that user's non-zero
// entries plus a shared mean correction, so the cost is O(sum_n W_n + |V|).
// An empty database has gamma = 0.
absl::StatusOr<SensitivityEstimate> BruteForceSensitivity(
    const CountsDatabase& db, double s, int64_t max_count);

// Per-word Lipschitz coefficients of xhat w.r.t. the max-norm of one user's
// counts:
//   L_i = (1 - 1/V) / N_i + sum_{j != i} 1 / (V N_j),
// over the words in `supports` (all must be >= 1). `vocab_size` is the full
// V used by the mean in xhat, which may exceed supports.size() when
// zero-support words have been left out.
absl::StatusOr<std::vector<double>> LipschitzCoeffs(
    std::span<const int64_t> supports, size_t vocab_size);

// How the weight-change term of the worst-case bound is formed.
enum class WeightChangeTerm {
  // w(N_i) - w(N_i - 1): the largest change one user can cause. Always an
  // upper bound on the real change.
  kExact,
  // (S/C) * 1(N_i <= C/S). Misses the drop to zero for N_i = 1 when S > C
  // and the partial step in the word where the clamp engages, so it can
  // undershoot the brute-force value.
  kIndicator,
};

// ||w . L C + dw . |xhat| ||_2 in O(|V|), where dw is the weight-change
// term. `xhat` and `supports` cover the same words (zero-support words
// removed by the caller).
absl::StatusOr<SensitivityEstimate> WorstCaseBound(
    std::span<const double> xhat, std::span<const int64_t> supports, double s,
    int64_t max_count, size_t vocab_size,
    WeightChangeTerm term = WeightChangeTerm::kExact);

// WorstCaseBound over the words of `db` with non-zero support. Zero-support
// words have w = 0 on both sides of any adjacent pair and never enter the
// change of the mean through their own counts.
absl::StatusOr<SensitivityEstimate> WorstCaseSensitivity(
    const CountsDatabase& db, double s, int64_t max_count,
    WeightChangeTerm term = WeightChangeTerm::kExact);

absl::StatusOr<SensitivityEstimate> EstimateSensitivity(
    const CountsDatabase& db, double s, int64_t max_count,
    SensitivityMethod method);

}  // namespace ngram_dp

#endif  // NGRAM_DP_SENSITIVITY_H_
