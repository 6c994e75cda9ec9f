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

#include "ngram_dp/random.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ngram_dp {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t DeriveSeed(uint64_t root, std::string_view label, uint64_t index) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(SplitMix64(root ^ h) + index);
}

double Rng::Uniform() {
  // 53 random mantissa bits, centred in their cell so 0 and 1 never occur.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::Laplace(double scale) {
  const double u = Uniform() - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::fabs(u));
  return u < 0.0 ? -magnitude : magnitude;
}

double Rng::Gaussian(double stddev) { return stddev * normal_(engine_); }

uint64_t Rng::UniformInt(uint64_t n) {
  return std::uniform_int_distribution<uint64_t>(0, n - 1)(engine_);
}

absl::StatusOr<std::vector<double>> SampleNoise(NoiseKind kind, double scale,
                                                size_t dims, uint64_t seed) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("noise scale must be finite and >= 0, got %g", scale));
  }
  std::vector<double> noise(dims, 0.0);
  if (scale == 0.0) return noise;
  Rng rng(seed);
  for (double& v : noise) {
    v = kind == NoiseKind::kLaplace ? rng.Laplace(scale) : rng.Gaussian(scale);
  }
  return noise;
}

}  // namespace ngram_dp
