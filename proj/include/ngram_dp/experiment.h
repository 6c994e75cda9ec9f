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

// Experiment orchestration: load data, run one mechanism, evaluate, and
// write the artifacts of a run.
//
// Output directory layout:
//   release.json   the released distribution and its provenance
//   eval.csv       mechanism,epsilon,delta,seed,metric,value
//   tuning.json    per-candidate scores (end-to-end only)
//   manifest.json  config hash, artifact paths, privacy ledger, duration
//
// Contribution limits: the per-user total cap T applies to every
// DP mechanism; the per-word clamp C applies to the Bayesian ones, while the
// Laplace variants clamp words at T so that their l1-sensitivity stays T.

#ifndef NGRAM_DP_EXPERIMENT_H_
#define NGRAM_DP_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ngram_dp/config.h"
#include "ngram_dp/counts.h"
#include "ngram_dp/eval.h"
#include "ngram_dp/mechanisms.h"
#include "ngram_dp/tuning.h"

namespace ngram_dp {

struct ExperimentData {
  CountsDatabase db;
  std::vector<double> alpha;
  // Already filtered to the vocabulary; empty when no held-out text exists.
  std::vector<std::string> heldout;
};

// Resolves file paths against `base_dir`. Synthetic data is drawn from
// DeriveSeed(seed, "data"); public noise from DeriveSeed(seed,
// "public-noise").
absl::StatusOr<ExperimentData> LoadData(const DataConfig& data,
                                        const std::string& base_dir,
                                        uint64_t seed);

struct MechanismRun {
  ReleasedDistribution release;
  PrivacyLedger ledger;
  std::optional<EndToEndResult> tuning;
};

// Applies the contribution limits for `mechanism.name` and runs it.
absl::StatusOr<MechanismRun> RunMechanism(const ResolvedMechanism& mechanism,
                                          const CountsDatabase& db,
                                          std::span<const double> alpha,
                                          uint64_t seed);

// Same mechanism at a different total budget; an end-to-end split keeps its
// proportions.
ResolvedMechanism WithEpsilon(ResolvedMechanism mechanism, double epsilon);

struct EvalRow {
  std::string mechanism;
  std::optional<double> epsilon;
  std::optional<double> delta;
  uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
};

inline constexpr char kCsvHeader[] =
    "mechanism,epsilon,delta,seed,metric,value";

// One CSV line (no trailing newline). Missing budgets are left empty.
std::string FormatCsvRow(const EvalRow& row);

// Shortest representation that parses back to the same double.
std::string FormatDouble(double value);

// KL(private || theta) against the raw private totals, and the conditional
// perplexity when `heldout` is non-empty and `perplexity` is set.
absl::StatusOr<std::vector<EvalRow>> Evaluate(const ExperimentData& data,
                                              const ReleasedDistribution& rel,
                                              const PrivacyLedger& ledger,
                                              const EvalConfig& eval);

// Provenance, parameters and theta. Budgets come from `ledger`, never from
// the config; a mechanism without a guarantee has null budgets.
std::string ReleaseToJson(const ReleasedDistribution& release,
                          const PrivacyLedger& ledger);
absl::StatusOr<ReleasedDistribution> ReleaseFromJson(std::string_view json);

std::string TuningToJson(const EndToEndResult& result);

struct RunManifest {
  std::string config_hash;
  std::map<std::string, std::string> artifacts;
  PrivacyLedger ledger;
  double duration_seconds = 0.0;
  std::string library_version;
};

std::string ManifestToJson(const RunManifest& manifest);

// Runs config.mechanism end to end and writes the artifacts under
// base_dir / config.output_dir. Rerunning with the same config reproduces
// release.json byte for byte.
absl::StatusOr<RunManifest> RunExperiment(const ExperimentConfig& config,
                                          const std::string& base_dir);

// One row per (mechanism, value, seed) written to sweep.csv. For epsilon
// the epsilon column carries the value; other variables are encoded in the
// metric name, e.g. kl[users=1000].
absl::StatusOr<std::string> RunSweep(const ExperimentConfig& config,
                                     const std::string& base_dir);

// Membership inference over config.attack with config.mechanism; writes
// attack.csv and attack.json.
absl::StatusOr<AttackReport> RunAttack(const ExperimentConfig& config,
                                       const std::string& base_dir);

std::string LibraryVersion();

}  // namespace ngram_dp

#endif  // NGRAM_DP_EXPERIMENT_H_
