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

// Declarative experiment configuration (JSON). Example:
//
//   {
//     "seed": 7,
//     "output_dir": "out",
//     "data": {"synthetic": {"num_users": 10000, "vocab_size": 1000}},
//     "mechanism": {"name": "bayesian", "epsilon": 0.1, "delta": 1e-5,
//                   "S": 0.01, "rho": 0.1},
//     "eval": {"kl": true}
//   }
//
// Unknown keys are rejected. Optional keys that are absent stay absent on
// serialization, so parse -> serialize -> parse is the identity.

#ifndef NGRAM_DP_CONFIG_H_
#define NGRAM_DP_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ngram_dp/sensitivity.h"
#include "ngram_dp/synthetic.h"
#include "ngram_dp/tuning.h"

namespace ngram_dp {

struct SyntheticConfig {
  size_t num_users = 1000;
  size_t vocab_size = 1000;
  double zipf_exponent = 1.0;
  size_t tokens_per_user = 20;
  size_t public_tokens = 0;
  double public_tail_start = 0.1;

  friend bool operator==(const SyntheticConfig&,
                         const SyntheticConfig&) = default;
};

struct MarkovConfig {
  MarkovCorpusParams params;
  int order = 3;

  friend bool operator==(const MarkovConfig&, const MarkovConfig&) = default;
};

// Exactly one of `synthetic`, `markov` or the file triple must be set.
// File paths are relative to the config file's directory.
struct DataConfig {
  std::optional<SyntheticConfig> synthetic;
  std::optional<MarkovConfig> markov;
  std::optional<std::string> vocabulary;
  std::optional<std::string> counts;
  std::optional<std::string> public_counts;
  // Held-out sentences for perplexity (file source only).
  std::optional<std::string> heldout;
  // Laplace noise added to the public counts before use.
  std::optional<double> public_noise;

  friend bool operator==(const DataConfig&, const DataConfig&) = default;
};

struct MechanismConfig {
  std::string name = "bayesian";
  double epsilon = 0.1;
  std::optional<double> delta;
  std::optional<double> s;
  std::optional<int64_t> max_count;  // C
  std::optional<int64_t> max_total;  // T
  std::optional<double> rho;
  std::optional<std::string> sensitivity;
  std::optional<int64_t> k;
  std::optional<double> epsilon1;
  std::optional<double> epsilon2;
  std::optional<int64_t> validation_max_count;
  std::optional<double> train_fraction;

  friend bool operator==(const MechanismConfig&,
                         const MechanismConfig&) = default;
};

struct GridConfig {
  std::vector<double> s;
  std::vector<double> rho;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct EvalConfig {
  bool kl = true;
  bool perplexity = false;

  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

struct AttackConfig {
  std::vector<double> epsilons;
  size_t trials = 1000;

  friend bool operator==(const AttackConfig&, const AttackConfig&) = default;
};

struct SweepConfig {
  // epsilon | users | vocab_size | public_noise
  std::string variable = "epsilon";
  std::vector<double> values;
  std::vector<std::string> mechanisms;
  std::vector<uint64_t> seeds;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct ExperimentConfig {
  uint64_t seed = 0;
  std::string output_dir = "out";
  DataConfig data;
  MechanismConfig mechanism;
  std::optional<GridConfig> grid;
  EvalConfig eval;
  std::optional<AttackConfig> attack;
  std::optional<SweepConfig> sweep;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Parses and validates. Errors are InvalidArgument and name the field.
absl::StatusOr<ExperimentConfig> ParseConfig(std::string_view json);

// Canonical JSON (sorted keys, 2-space indent).
std::string SerializeConfig(const ExperimentConfig& config);

absl::Status ValidateConfig(const ExperimentConfig& config);

// Mechanism parameters with defaults filled in for a database of
// `num_users` users:
//   C  = 1 below 10^6 users, else 10
//   T  = max(1, num_users / 1000)
//   epsilon1 = epsilon / 3, epsilon2 = 2 epsilon / 3 (end-to-end)
struct ResolvedMechanism {
  std::string name;
  double epsilon = 0.0;
  double delta = 1e-5;
  double s = 1.0;
  int64_t max_count = 1;
  int64_t max_total = 1;
  double rho = 0.5;
  SensitivityMethod method = SensitivityMethod::kBruteForce;
  int64_t k = 10;
  double epsilon1 = 0.0;
  double epsilon2 = 0.0;
  int64_t validation_max_count = 1;
  double train_fraction = 0.9;
  HyperGrid grid;
};

absl::StatusOr<ResolvedMechanism> ResolveMechanism(
    const ExperimentConfig& config, size_t num_users);

int64_t DefaultMaxCount(size_t num_users);
int64_t DefaultMaxTotal(size_t num_users);

// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string ConfigHash(const ExperimentConfig& config);

}  // namespace ngram_dp

#endif  // NGRAM_DP_CONFIG_H_
