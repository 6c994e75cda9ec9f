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

#include "ngram_dp/mechanisms.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ngram_dp/kernels.h"
#include "ngram_dp/random.h"
#include "ngram_dp/transforms.h"

namespace ngram_dp {
namespace {

absl::Status ValidateEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be finite and > 0, got %g", epsilon));
  }
  return absl::OkStatus();
}

absl::Status ValidateAlpha(std::span<const double> alpha, size_t vocab_size) {
  if (alpha.size() != vocab_size) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "public counts have %d entries but the vocabulary has %d", alpha.size(),
        vocab_size));
  }
  return absl::OkStatus();
}

std::vector<double> ToDouble(std::span<const int64_t> v) {
  return std::vector<double>(v.begin(), v.end());
}

}  // namespace

absl::StatusOr<double> GaussianSigma(double gamma, double rho, double epsilon,
                                     double delta) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sensitivity must be finite and >= 0, got %g", gamma));
  }
  if (!(rho >= 0.0 && rho <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("rho must lie in [0, 1], got %g", rho));
  }
  if (absl::Status s = ValidateEpsilon(epsilon); !s.ok()) return s;
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", delta));
  }
  return rho * gamma * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

absl::StatusOr<GaussianPosterior> ComputeGaussianPosterior(
    const CountsDatabase& db, std::span<const double> xhat,
    std::span<const double> prior, const BayesianParams& params) {
  absl::StatusOr<SensitivityEstimate> sensitivity =
      EstimateSensitivity(db, params.s, params.max_count, params.method);
  if (!sensitivity.ok()) return sensitivity.status();
  absl::StatusOr<double> sigma = GaussianSigma(sensitivity->gamma, params.rho,
                                               params.epsilon, params.delta);
  if (!sigma.ok()) return sigma.status();
  absl::StatusOr<std::vector<double>> w =
      DecayWeights(db.supports(), params.s, params.max_count);
  if (!w.ok()) return w.status();
  absl::StatusOr<std::vector<double>> mean =
      PosteriorMean(xhat, prior, *w, params.rho);
  if (!mean.ok()) return mean.status();
  return GaussianPosterior{*std::move(mean), *sigma, *std::move(sensitivity)};
}

std::vector<double> SamplePosterior(const GaussianPosterior& posterior,
                                    uint64_t seed) {
  std::vector<double> h = posterior.mean;
  if (posterior.sigma > 0.0) {
    Rng rng(DeriveSeed(seed, "gaussian-release"));
    for (double& v : h) v += rng.Gaussian(posterior.sigma);
  }
  return Softmax(h);
}

absl::StatusOr<ReleasedDistribution> BayesianDp(const CountsDatabase& db,
                                                std::span<const double> alpha,
                                                const BayesianParams& params,
                                                uint64_t seed) {
  if (!(params.rho > 0.0 && params.rho <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("rho must lie in (0, 1], got %g", params.rho));
  }
  if (absl::Status s = ValidateAlpha(alpha, db.vocab_size()); !s.ok()) {
    return s;
  }
  if (params.max_count < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "maximum per-user count C must be >= 1, got %d", params.max_count));
  }
  const CountsDatabase clamped = db.WithContributionLimits(params.max_count);
  absl::StatusOr<std::vector<double>> xhat = LogNormalize(clamped.totals());
  if (!xhat.ok()) return xhat.status();
  absl::StatusOr<std::vector<double>> prior = PublicPrior(alpha);
  if (!prior.ok()) return prior.status();
  absl::StatusOr<GaussianPosterior> posterior =
      ComputeGaussianPosterior(clamped, *xhat, *prior, params);
  if (!posterior.ok()) return posterior.status();

  ReleasedDistribution release;
  release.mechanism = kBayesianMechanism;
  release.seed = seed;
  release.epsilon_spent = params.epsilon;
  release.delta_spent = params.delta;
  release.noise_scale = posterior->sigma;
  release.sensitivity = posterior->sensitivity.gamma;
  release.gaussian_extrapolated = params.epsilon >= 1.0;
  release.params = {
      {"S", params.s},
      {"C", static_cast<double>(params.max_count)},
      {"rho", params.rho},
      {"epsilon", params.epsilon},
      {"delta", params.delta},
      {"brute_force",
       params.method == SensitivityMethod::kBruteForce ? 1.0 : 0.0}};
  release.theta = SamplePosterior(*posterior, seed);
  return release;
}

absl::StatusOr<ReleasedDistribution> LaplaceBaseline(const CountsDatabase& db,
                                                     int64_t max_total,
                                                     double epsilon,
                                                     uint64_t seed) {
  if (absl::Status s = ValidateEpsilon(epsilon); !s.ok()) return s;
  if (max_total < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("per-user total W must be >= 1, got %d", max_total));
  }
  if (db.vocab_size() == 0) {
    return absl::InvalidArgumentError("empty vocabulary");
  }
  const CountsDatabase limited =
      db.WithContributionLimits(max_total, max_total);
  const double scale = static_cast<double>(max_total) / epsilon;
  absl::StatusOr<std::vector<double>> noise =
      SampleNoise(NoiseKind::kLaplace, scale, db.vocab_size(),
                  DeriveSeed(seed, "laplace-release"));
  if (!noise.ok()) return noise.status();
  const std::vector<double> totals = ToDouble(limited.totals());
  std::vector<double> noisy(totals.size());
  kernels::AddRelu(totals, *noise, noisy);

  ReleasedDistribution release;
  release.mechanism = kLaplaceMechanism;
  release.seed = seed;
  release.epsilon_spent = epsilon;
  release.delta_spent = 0.0;
  release.noise_scale = scale;
  release.sensitivity = static_cast<double>(max_total);
  release.params = {
      {"W", static_cast<double>(max_total)},
      {"epsilon", epsilon},
      {"floor", 1.0 / (static_cast<double>(db.vocab_size()) * kFloorDivisor)}};
  release.theta = NormalizeWithFloor(noisy);
  return release;
}

absl::StatusOr<ModifiedLaplaceAggregate> ComputeModifiedLaplaceAggregate(
    const CountsDatabase& db, std::span<const double> alpha) {
  if (absl::Status s = ValidateAlpha(alpha, db.vocab_size()); !s.ok()) {
    return s;
  }
  double alpha_total = 0.0;
  for (double a : alpha) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      return absl::InvalidArgumentError(
          "public counts must be finite and >= 0");
    }
    alpha_total += a;
  }
  if (!(alpha_total > 0.0)) {
    return absl::InvalidArgumentError(
        "public counts must have a positive total");
  }
  const size_t vocab_size = db.vocab_size();
  ModifiedLaplaceAggregate out;
  out.normalized_alpha.assign(alpha.begin(), alpha.end());
  kernels::Scale(1.0 / alpha_total, out.normalized_alpha);
  const std::vector<double>& alpha_tilde = out.normalized_alpha;
  std::span<const int64_t> totals = db.totals();

  // numerator_i = sum_n dc_i^n * (dc_i^n / |dc^n|_1 - alpha~_i), so that
  // g_i = numerator_i / c_i.
  auto user_term = [&](const SparseEntry& e, double user_total) {
    const double dc = static_cast<double>(e.count);
    return dc * (dc / user_total - alpha_tilde[e.index]);
  };
  std::vector<double> numerator(vocab_size, 0.0);
  for (const UserContribution& user : db.users()) {
    const double user_total = static_cast<double>(user.Total());
    for (const SparseEntry& e : user.counts) {
      numerator[e.index] += user_term(e, user_total);
    }
  }
  out.aggregate.assign(vocab_size, 0.0);
  for (size_t i = 0; i < vocab_size; ++i) {
    if (totals[i] > 0) {
      out.aggregate[i] = numerator[i] / static_cast<double>(totals[i]);
    }
  }

  // Removing a user only changes the words it holds.
  for (const UserContribution& user : db.users()) {
    const double user_total = static_cast<double>(user.Total());
    double l1 = 0.0;
    for (const SparseEntry& e : user.counts) {
      const int64_t remaining = totals[e.index] - e.count;
      const double adjacent =
          remaining > 0 ? (numerator[e.index] - user_term(e, user_total)) /
                              static_cast<double>(remaining)
                        : 0.0;
      l1 += std::fabs(out.aggregate[e.index] - adjacent);
    }
    out.l1_sensitivity = std::max(out.l1_sensitivity, l1);
  }
  return out;
}

absl::StatusOr<ReleasedDistribution> ModifiedLaplaceBaseline(
    const CountsDatabase& db, std::span<const double> alpha, double epsilon,
    uint64_t seed) {
  if (absl::Status s = ValidateEpsilon(epsilon); !s.ok()) return s;
  absl::StatusOr<ModifiedLaplaceAggregate> deterministic =
      ComputeModifiedLaplaceAggregate(db, alpha);
  if (!deterministic.ok()) return deterministic.status();
  const double scale = deterministic->l1_sensitivity / epsilon;
  absl::StatusOr<std::vector<double>> noise =
      SampleNoise(NoiseKind::kLaplace, scale, db.vocab_size(),
                  DeriveSeed(seed, "modified-laplace-release"));
  if (!noise.ok()) return noise.status();

  std::vector<double> base = deterministic->aggregate;
  for (size_t i = 0; i < base.size(); ++i) {
    base[i] += deterministic->normalized_alpha[i];
  }
  std::vector<double> noisy(base.size());
  kernels::AddRelu(base, *noise, noisy);

  ReleasedDistribution release;
  release.mechanism = kModifiedLaplaceMechanism;
  release.seed = seed;
  release.epsilon_spent = epsilon;
  release.delta_spent = 0.0;
  release.noise_scale = scale;
  release.sensitivity = deterministic->l1_sensitivity;
  release.params = {
      {"epsilon", epsilon},
      {"floor", 1.0 / (static_cast<double>(db.vocab_size()) * kFloorDivisor)}};
  release.theta = NormalizeWithFloor(noisy);
  return release;
}

absl::StatusOr<ReleasedDistribution> KAnonymize(const CountsDatabase& db,
                                                int64_t k) {
  if (k < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("K must be >= 1, got %d", k));
  }
  if (db.vocab_size() == 0) {
    return absl::InvalidArgumentError("empty vocabulary");
  }
  std::vector<double> kept(db.vocab_size(), 0.0);
  for (size_t i = 0; i < kept.size(); ++i) {
    if (db.supports()[i] >= k) kept[i] = static_cast<double>(db.totals()[i]);
  }
  ReleasedDistribution release;
  release.mechanism = kKAnonymityMechanism;
  release.params = {
      {"K", static_cast<double>(k)},
      {"floor", 1.0 / (static_cast<double>(db.vocab_size()) * kFloorDivisor)}};
  release.theta = NormalizeWithFloor(kept);
  return release;
}

absl::StatusOr<ReleasedDistribution> PublicBaseline(
    std::span<const double> alpha) {
  absl::StatusOr<std::vector<double>> prior = PublicPrior(alpha);
  if (!prior.ok()) return prior.status();
  ReleasedDistribution release;
  release.mechanism = kPublicMechanism;
  release.epsilon_spent = 0.0;
  release.delta_spent = 0.0;
  release.theta = Softmax(*prior);
  return release;
}

std::vector<double> NormalizeWithFloor(std::span<const double> values) {
  const size_t n = values.size();
  std::vector<double> p(values.begin(), values.end());
  if (n == 0) return p;
  const double total = kernels::Sum(p);
  if (!(total > 0.0)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n));
    return p;
  }
  kernels::Scale(1.0 / total, p);
  const double floor = 1.0 / (static_cast<double>(n) * kFloorDivisor);
  for (double& v : p) {
    if (v <= 0.0) v = floor;
  }
  kernels::Scale(1.0 / kernels::Sum(p), p);
  return p;
}

}  // namespace ngram_dp
