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

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ngram_dp/kernels.h"

namespace ngram_dp {

absl::StatusOr<std::vector<double>> LogNormalize(
    std::span<const double> counts) {
  if (counts.empty()) {
    return absl::InvalidArgumentError("cannot log-normalize an empty vector");
  }
  std::vector<double> x(counts.size());
  for (size_t i = 0; i < counts.size(); ++i) {
    if (!(counts[i] >= 0.0) || !std::isfinite(counts[i])) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "counts must be finite and >= 0; entry %d is %g", i, counts[i]));
    }
    x[i] = std::log1p(counts[i]);
  }
  const double mean = kernels::Sum(x) / static_cast<double>(x.size());
  kernels::AddScalar(-mean, x);
  return x;
}

absl::StatusOr<std::vector<double>> LogNormalize(
    std::span<const int64_t> counts) {
  std::vector<double> as_double(counts.begin(), counts.end());
  return LogNormalize(std::span<const double>(as_double));
}

absl::StatusOr<std::vector<double>> PublicPrior(std::span<const double> alpha) {
  return LogNormalize(alpha);
}

double DecayWeight(int64_t support, double s, int64_t max_count) {
  if (support <= 0) return 0.0;
  const double scaled = s * static_cast<double>(support);
  const double c = static_cast<double>(max_count);
  return scaled >= c ? 1.0 : scaled / c;
}

absl::StatusOr<std::vector<double>> DecayWeights(
    std::span<const int64_t> supports, double s, int64_t max_count) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("weighting parameter S must be > 0, got %g", s));
  }
  if (max_count < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "maximum per-user count C must be >= 1, got %d", max_count));
  }
  std::vector<double> w(supports.size());
  for (size_t i = 0; i < supports.size(); ++i) {
    if (supports[i] < 0) {
      return absl::InvalidArgumentError("supports must be >= 0");
    }
    w[i] = DecayWeight(supports[i], s, max_count);
  }
  return w;
}

absl::StatusOr<std::vector<double>> PosteriorMean(std::span<const double> xhat,
                                                  std::span<const double> mu_p,
                                                  std::span<const double> w,
                                                  double rho) {
  if (xhat.size() != mu_p.size() || xhat.size() != w.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("length mismatch: xhat %d, mu_p %d, w %d", xhat.size(),
                        mu_p.size(), w.size()));
  }
  if (!(rho >= 0.0 && rho <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("rho must lie in [0, 1], got %g", rho));
  }
  std::vector<double> mu(xhat.size());
  kernels::WeightedBlend(rho, w, xhat, 1.0 - rho, mu_p, mu);
  return mu;
}

double LogSumExp(std::span<const double> h) {
  if (h.empty()) return -std::numeric_limits<double>::infinity();
  const double shift = kernels::Max(h);
  double total = 0.0;
  for (double v : h) total += std::exp(v - shift);
  return shift + std::log(total);
}

std::vector<double> Softmax(std::span<const double> h) {
  std::vector<double> theta(h.size());
  if (h.empty()) return theta;
  const double shift = kernels::Max(h);
  for (size_t i = 0; i < h.size(); ++i) theta[i] = std::exp(h[i] - shift);
  kernels::Scale(1.0 / kernels::Sum(theta), theta);
  constexpr double kTiny = std::numeric_limits<double>::min();
  for (double& t : theta) t = std::max(t, kTiny);
  return theta;
}

}  // namespace ngram_dp
