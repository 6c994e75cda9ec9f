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

#include "ngram_dp/experiment.h"

#include <chrono>
#include <filesystem>
#include <memory>
#include <sstream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "ngram_dp/counts_io.h"
#include "ngram_dp/random.h"
#include "ngram_dp/synthetic.h"

#ifndef NGRAM_DP_VERSION
#define NGRAM_DP_VERSION "0.0.0"
#endif

namespace ngram_dp {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string Resolve(const std::string& base_dir, const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (fs::path(base_dir) / p).string();
}

absl::Status WriteFile(const fs::path& path, std::string_view contents) {
  return WriteStringToFile(path.string(), contents);
}

absl::StatusOr<fs::path> PrepareOutputDir(const ExperimentConfig& config,
                                          const std::string& base_dir) {
  const fs::path dir(Resolve(base_dir, config.output_dir));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::NotFoundError(
        absl::StrFormat("cannot create output directory \"%s\": %s",
                        dir.string(), ec.message()));
  }
  return dir;
}

json BudgetValue(const PrivacyLedger& ledger, bool epsilon) {
  if (ledger.empty()) return nullptr;
  return epsilon ? ledger.total().epsilon : ledger.total().delta;
}

json LedgerToJson(const PrivacyLedger& ledger) {
  json entries = json::array();
  for (const LedgerEntry& e : ledger.entries()) {
    entries.push_back({{"mechanism", e.mechanism},
                       {"epsilon", e.epsilon},
                       {"delta", e.delta}});
  }
  return {{"entries", entries},
          {"epsilon_total", BudgetValue(ledger, true)},
          {"delta_total", BudgetValue(ledger, false)}};
}

std::optional<double> LedgerEpsilon(const PrivacyLedger& ledger) {
  if (ledger.empty()) return std::nullopt;
  return ledger.total().epsilon;
}

std::optional<double> LedgerDelta(const PrivacyLedger& ledger) {
  if (ledger.empty()) return std::nullopt;
  return ledger.total().delta;
}

}  // namespace

std::string LibraryVersion() { return NGRAM_DP_VERSION; }

absl::StatusOr<ExperimentData> LoadData(const DataConfig& data,
                                        const std::string& base_dir,
                                        uint64_t seed) {
  const uint64_t data_seed = DeriveSeed(seed, "data");
  std::optional<ExperimentData> loaded;
  if (data.synthetic.has_value()) {
    const SyntheticConfig& s = *data.synthetic;
    SyntheticCorpusParams params;
    params.num_users = s.num_users;
    params.vocab_size = s.vocab_size;
    params.zipf_exponent = s.zipf_exponent;
    params.tokens_per_user = s.tokens_per_user;
    params.public_tokens = s.public_tokens;
    params.public_tail_start = s.public_tail_start;
    absl::StatusOr<SyntheticCorpus> corpus =
        GenerateSyntheticCorpus(params, data_seed);
    if (!corpus.ok()) return corpus.status();
    loaded.emplace(
        ExperimentData{std::move(corpus->db), std::move(corpus->alpha), {}});
  } else if (data.markov.has_value()) {
    absl::StatusOr<MarkovCorpus> corpus =
        GenerateMarkovCorpus(data.markov->params, data_seed);
    if (!corpus.ok()) return corpus.status();
    absl::StatusOr<NgramDataset> dataset =
        BuildNgramDataset(*corpus, data.markov->order);
    if (!dataset.ok()) return dataset.status();
    std::vector<std::string> heldout =
        FilterCorpus(dataset->db.vocabulary(), corpus->heldout_sentences);
    loaded.emplace(ExperimentData{
        std::move(dataset->db), std::move(dataset->alpha), std::move(heldout)});
  } else {
    absl::StatusOr<std::string> vocab_text =
        ReadFileToString(Resolve(base_dir, *data.vocabulary));
    if (!vocab_text.ok()) return vocab_text.status();
    std::istringstream vocab_in(*vocab_text);
    absl::StatusOr<Vocabulary> vocabulary = ReadVocabulary(vocab_in);
    if (!vocabulary.ok()) return vocabulary.status();
    auto shared = std::make_shared<const Vocabulary>(*std::move(vocabulary));

    absl::StatusOr<std::string> counts_text =
        ReadFileToString(Resolve(base_dir, *data.counts));
    if (!counts_text.ok()) return counts_text.status();
    std::istringstream counts_in(*counts_text);
    absl::StatusOr<CountsDatabase> db = ReadCounts(counts_in, shared);
    if (!db.ok()) return db.status();

    absl::StatusOr<std::string> public_text =
        ReadFileToString(Resolve(base_dir, *data.public_counts));
    if (!public_text.ok()) return public_text.status();
    std::istringstream public_in(*public_text);
    absl::StatusOr<std::vector<double>> alpha =
        ReadPublicCounts(public_in, *shared);
    if (!alpha.ok()) return alpha.status();

    std::vector<std::string> heldout;
    if (data.heldout.has_value()) {
      absl::StatusOr<std::string> text =
          ReadFileToString(Resolve(base_dir, *data.heldout));
      if (!text.ok()) return text.status();
      std::istringstream in(*text);
      heldout = FilterCorpus(*shared, ReadLines(in));
    }
    loaded.emplace(
        ExperimentData{*std::move(db), *std::move(alpha), std::move(heldout)});
  }
  if (data.public_noise.has_value() && *data.public_noise > 0.0) {
    absl::StatusOr<std::vector<double>> degraded = DegradePublic(
        loaded->alpha, *data.public_noise, DeriveSeed(seed, "public-noise"));
    if (!degraded.ok()) return degraded.status();
    loaded->alpha = *std::move(degraded);
  }
  return *std::move(loaded);
}

absl::StatusOr<MechanismRun> RunMechanism(const ResolvedMechanism& m,
                                          const CountsDatabase& db,
                                          std::span<const double> alpha,
                                          uint64_t seed) {
  MechanismRun run;
  absl::StatusOr<ReleasedDistribution> release;
  if (m.name == kBayesianMechanism) {
    BayesianParams params{m.epsilon,   m.delta, m.s,
                          m.max_count, m.rho,   m.method};
    release = BayesianDp(db.WithContributionLimits(m.max_count, m.max_total),
                         alpha, params, seed);
    if (release.ok()) release->params["T"] = static_cast<double>(m.max_total);
  } else if (m.name == kEndToEndMechanism) {
    EndToEndParams params;
    params.epsilon1 = m.epsilon1;
    params.epsilon2 = m.epsilon2;
    params.delta = m.delta;
    params.max_count = m.max_count;
    params.validation_max_count = m.validation_max_count;
    params.train_fraction = m.train_fraction;
    params.method = m.method;
    params.grid = m.grid;
    absl::StatusOr<EndToEndResult> result =
        EndToEndDp(db.WithContributionLimits(m.max_count, m.max_total), alpha,
                   params, seed);
    if (!result.ok()) return result.status();
    result->release.params["T"] = static_cast<double>(m.max_total);
    run.release = result->release;
    run.ledger = result->ledger;
    run.tuning = *std::move(result);
    return run;
  } else if (m.name == kLaplaceMechanism) {
    release = LaplaceBaseline(db, m.max_total, m.epsilon, seed);
  } else if (m.name == kModifiedLaplaceMechanism) {
    release = ModifiedLaplaceBaseline(
        db.WithContributionLimits(m.max_total, m.max_total), alpha, m.epsilon,
        seed);
    if (release.ok()) release->params["T"] = static_cast<double>(m.max_total);
  } else if (m.name == kKAnonymityMechanism) {
    release = KAnonymize(db, m.k);
  } else if (m.name == kPublicMechanism) {
    release = PublicBaseline(alpha);
  } else if (m.name == "private") {
    release = PrivateBaseline(db);
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown mechanism \"%s\"", m.name));
  }
  if (!release.ok()) return release.status();
  release->seed = seed;
  if (release->epsilon_spent.has_value()) {
    run.ledger.Charge(release->mechanism, *release->epsilon_spent,
                      release->delta_spent.value_or(0.0));
  }
  run.release = *std::move(release);
  return run;
}

ResolvedMechanism WithEpsilon(ResolvedMechanism m, double epsilon) {
  const double fraction = m.epsilon > 0.0 ? m.epsilon1 / m.epsilon : 1.0 / 3.0;
  m.epsilon = epsilon;
  m.epsilon1 = fraction * epsilon;
  m.epsilon2 = epsilon - m.epsilon1;
  return m;
}

std::string FormatDouble(double value) { return json(value).dump(); }

std::string FormatCsvRow(const EvalRow& row) {
  return absl::StrCat(
      row.mechanism, ",",
      row.epsilon.has_value() ? FormatDouble(*row.epsilon) : "", ",",
      row.delta.has_value() ? FormatDouble(*row.delta) : "", ",", row.seed, ",",
      row.metric, ",", FormatDouble(row.value));
}

absl::StatusOr<std::vector<EvalRow>> Evaluate(const ExperimentData& data,
                                              const ReleasedDistribution& rel,
                                              const PrivacyLedger& ledger,
                                              const EvalConfig& eval) {
  std::vector<EvalRow> rows;
  const EvalRow base{rel.mechanism,
                     LedgerEpsilon(ledger),
                     LedgerDelta(ledger),
                     rel.seed,
                     "",
                     0.0};
  if (eval.kl) {
    absl::StatusOr<std::vector<double>> p =
        EmpiricalDistribution(data.db.totals());
    if (!p.ok()) return p.status();
    absl::StatusOr<double> kl = KlDivergence(*p, rel.theta);
    if (!kl.ok()) return kl.status();
    EvalRow row = base;
    row.metric = "kl";
    row.value = *kl;
    rows.push_back(row);
  }
  if (eval.perplexity) {
    if (data.heldout.empty()) {
      return absl::FailedPreconditionError(
          "no held-out sentence is covered by the vocabulary");
    }
    absl::StatusOr<double> ppl =
        ConditionalPerplexity(data.db.vocabulary(), rel.theta, data.heldout);
    if (!ppl.ok()) return ppl.status();
    EvalRow row = base;
    row.metric = "perplexity";
    row.value = *ppl;
    rows.push_back(row);
  }
  return rows;
}

std::string ReleaseToJson(const ReleasedDistribution& release,
                          const PrivacyLedger& ledger) {
  json params = json::object();
  for (const auto& [key, value] : release.params) params[key] = value;
  json root = {
      {"mechanism", release.mechanism},
      {"seed", release.seed},
      {"epsilon_spent", BudgetValue(ledger, true)},
      {"delta_spent", BudgetValue(ledger, false)},
      {"noise_scale", release.noise_scale},
      {"sensitivity", release.sensitivity.has_value()
                          ? json(*release.sensitivity)
                          : json(nullptr)},
      {"classical_gaussian_extrapolated", release.gaussian_extrapolated},
      {"params", params},
      {"vocabulary_size", release.theta.size()},
      {"theta", release.theta}};
  return root.dump(2) + "\n";
}

absl::StatusOr<ReleasedDistribution> ReleaseFromJson(std::string_view text) {
  json root = json::parse(text.begin(), text.end(), nullptr, false);
  if (root.is_discarded() || !root.is_object()) {
    return absl::DataLossError("release file is not a JSON object");
  }
  ReleasedDistribution release;
  try {
    release.mechanism = root.at("mechanism").get<std::string>();
    release.seed = root.at("seed").get<uint64_t>();
    if (!root.at("epsilon_spent").is_null()) {
      release.epsilon_spent = root.at("epsilon_spent").get<double>();
    }
    if (!root.at("delta_spent").is_null()) {
      release.delta_spent = root.at("delta_spent").get<double>();
    }
    release.noise_scale = root.at("noise_scale").get<double>();
    if (!root.at("sensitivity").is_null()) {
      release.sensitivity = root.at("sensitivity").get<double>();
    }
    release.gaussian_extrapolated =
        root.at("classical_gaussian_extrapolated").get<bool>();
    for (const auto& [key, value] : root.at("params").items()) {
      release.params[key] = value.get<double>();
    }
    release.theta = root.at("theta").get<std::vector<double>>();
  } catch (const json::exception& e) {
    return absl::DataLossError(
        absl::StrFormat("malformed release file: %s", e.what()));
  }
  if (release.theta.size() != root.value("vocabulary_size", size_t{0})) {
    return absl::DataLossError("release theta length != vocabulary_size");
  }
  return release;
}

std::string TuningToJson(const EndToEndResult& result) {
  json candidates = json::array();
  for (const ScoredCandidate& c : result.candidates) {
    candidates.push_back({{"index", c.index},
                          {"S", c.params.s},
                          {"rho", c.params.rho},
                          {"score", c.score},
                          {"noisy_score", c.noisy_score},
                          {"score_sensitivity", c.score_sensitivity},
                          {"sigma", c.posterior.sigma},
                          {"gamma", c.posterior.sensitivity.gamma}});
  }
  json root = {{"candidates", candidates},
               {"selected", result.selected},
               {"score_sensitivity", result.score_sensitivity},
               {"ledger", LedgerToJson(result.ledger)}};
  return root.dump(2) + "\n";
}

std::string ManifestToJson(const RunManifest& manifest) {
  json artifacts = json::object();
  for (const auto& [key, value] : manifest.artifacts) artifacts[key] = value;
  json root = {{"config_hash", manifest.config_hash},
               {"artifacts", artifacts},
               {"ledger", LedgerToJson(manifest.ledger)},
               {"duration_seconds", manifest.duration_seconds},
               {"library_version", manifest.library_version}};
  return root.dump(2) + "\n";
}

absl::StatusOr<RunManifest> RunExperiment(const ExperimentConfig& config,
                                          const std::string& base_dir) {
  const auto start = std::chrono::steady_clock::now();
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  absl::StatusOr<fs::path> out_dir = PrepareOutputDir(config, base_dir);
  if (!out_dir.ok()) return out_dir.status();
  absl::StatusOr<ExperimentData> data =
      LoadData(config.data, base_dir, config.seed);
  if (!data.ok()) return data.status();
  absl::StatusOr<ResolvedMechanism> mechanism =
      ResolveMechanism(config, data->db.num_users());
  if (!mechanism.ok()) return mechanism.status();
  absl::StatusOr<MechanismRun> run =
      RunMechanism(*mechanism, data->db, data->alpha, config.seed);
  if (!run.ok()) return run.status();
  absl::StatusOr<std::vector<EvalRow>> rows =
      Evaluate(*data, run->release, run->ledger, config.eval);
  if (!rows.ok()) return rows.status();

  RunManifest manifest;
  manifest.config_hash = ConfigHash(config);
  manifest.ledger = run->ledger;
  manifest.library_version = LibraryVersion();

  const fs::path release_path = *out_dir / "release.json";
  if (absl::Status s =
          WriteFile(release_path, ReleaseToJson(run->release, run->ledger));
      !s.ok()) {
    return s;
  }
  manifest.artifacts["release"] = release_path.string();

  std::string csv = absl::StrCat(kCsvHeader, "\n");
  for (const EvalRow& row : *rows)
    absl::StrAppend(&csv, FormatCsvRow(row), "\n");
  const fs::path eval_path = *out_dir / "eval.csv";
  if (absl::Status s = WriteFile(eval_path, csv); !s.ok()) return s;
  manifest.artifacts["eval"] = eval_path.string();

  if (run->tuning.has_value()) {
    const fs::path tuning_path = *out_dir / "tuning.json";
    if (absl::Status s = WriteFile(tuning_path, TuningToJson(*run->tuning));
        !s.ok()) {
      return s;
    }
    manifest.artifacts["tuning"] = tuning_path.string();
  }

  const fs::path manifest_path = *out_dir / "manifest.json";
  manifest.artifacts["manifest"] = manifest_path.string();
  manifest.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (absl::Status s = WriteFile(manifest_path, ManifestToJson(manifest));
      !s.ok()) {
    return s;
  }
  return manifest;
}

absl::StatusOr<std::string> RunSweep(const ExperimentConfig& config,
                                     const std::string& base_dir) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  if (!config.sweep.has_value()) {
    return absl::InvalidArgumentError("sweep: section required");
  }
  const SweepConfig& sweep = *config.sweep;
  absl::StatusOr<fs::path> out_dir = PrepareOutputDir(config, base_dir);
  if (!out_dir.ok()) return out_dir.status();

  EvalConfig kl_only;
  kl_only.kl = true;
  kl_only.perplexity = false;
  std::string csv = absl::StrCat(kCsvHeader, "\n");
  for (double value : sweep.values) {
    DataConfig data = config.data;
    if (sweep.variable == "users") {
      data.synthetic->num_users = static_cast<size_t>(value);
    } else if (sweep.variable == "vocab_size") {
      data.synthetic->vocab_size = static_cast<size_t>(value);
    } else if (sweep.variable == "public_noise") {
      data.public_noise = value;
    }
    for (uint64_t seed : sweep.seeds) {
      absl::StatusOr<ExperimentData> loaded = LoadData(data, base_dir, seed);
      if (!loaded.ok()) return loaded.status();
      for (const std::string& name : sweep.mechanisms) {
        ExperimentConfig variant = config;
        variant.mechanism.name = name;
        if (name != kEndToEndMechanism) {
          variant.mechanism.epsilon1.reset();
          variant.mechanism.epsilon2.reset();
        }
        absl::StatusOr<ResolvedMechanism> mechanism =
            ResolveMechanism(variant, loaded->db.num_users());
        if (!mechanism.ok()) return mechanism.status();
        if (sweep.variable == "epsilon") {
          *mechanism = WithEpsilon(*std::move(mechanism), value);
        }
        absl::StatusOr<MechanismRun> run =
            RunMechanism(*mechanism, loaded->db, loaded->alpha, seed);
        if (!run.ok()) return run.status();
        absl::StatusOr<std::vector<EvalRow>> rows =
            Evaluate(*loaded, run->release, run->ledger, kl_only);
        if (!rows.ok()) return rows.status();
        for (EvalRow row : *rows) {
          if (sweep.variable != "epsilon") {
            const bool integral =
                sweep.variable == "users" || sweep.variable == "vocab_size";
            row.metric = absl::StrFormat(
                "%s[%s=%s]", row.metric, sweep.variable,
                integral ? absl::StrFormat("%d", static_cast<int64_t>(value))
                         : FormatDouble(value));
          }
          absl::StrAppend(&csv, FormatCsvRow(row), "\n");
        }
      }
    }
  }
  const fs::path path = *out_dir / "sweep.csv";
  if (absl::Status s = WriteFile(path, csv); !s.ok()) return s;
  return path.string();
}

absl::StatusOr<AttackReport> RunAttack(const ExperimentConfig& config,
                                       const std::string& base_dir) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  if (!config.attack.has_value()) {
    return absl::InvalidArgumentError("attack: section required");
  }
  absl::StatusOr<fs::path> out_dir = PrepareOutputDir(config, base_dir);
  if (!out_dir.ok()) return out_dir.status();
  absl::StatusOr<ExperimentData> data =
      LoadData(config.data, base_dir, config.seed);
  if (!data.ok()) return data.status();
  // Limits are fixed from the full database so that D and D-u are processed
  // identically.
  absl::StatusOr<ResolvedMechanism> mechanism =
      ResolveMechanism(config, data->db.num_users());
  if (!mechanism.ok()) return mechanism.status();

  std::map<double, PrivacyLedger> ledgers;
  const std::vector<double>& alpha = data->alpha;
  ReleaseFn release =
      [&](const CountsDatabase& db, double epsilon,
          uint64_t seed) -> absl::StatusOr<std::vector<double>> {
    absl::StatusOr<MechanismRun> run =
        RunMechanism(WithEpsilon(*mechanism, epsilon), db, alpha, seed);
    if (!run.ok()) return run.status();
    ledgers[epsilon] = run->ledger;
    return std::move(run->release.theta);
  };
  absl::StatusOr<AttackReport> report = MembershipInference(
      data->db, mechanism->name, release, config.attack->epsilons,
      config.attack->trials, config.seed);
  if (!report.ok()) return report.status();

  std::string csv = absl::StrCat(kCsvHeader, "\n");
  json per_epsilon = json::array();
  for (size_t i = 0; i < report->epsilons.size(); ++i) {
    const PrivacyLedger& ledger = ledgers[report->epsilons[i]];
    EvalRow row{report->mechanism,       LedgerEpsilon(ledger),
                LedgerDelta(ledger),     config.seed,
                "inference_probability", report->probabilities[i]};
    absl::StrAppend(&csv, FormatCsvRow(row), "\n");
    per_epsilon.push_back({{"epsilon", report->epsilons[i]},
                           {"epsilon_spent", BudgetValue(ledger, true)},
                           {"delta_spent", BudgetValue(ledger, false)},
                           {"probability", report->probabilities[i]}});
  }
  json root = {{"mechanism", report->mechanism},
               {"removed_user_id", report->removed_user_id},
               {"trials", report->trials},
               {"results", per_epsilon}};
  if (absl::Status s = WriteFile(*out_dir / "attack.csv", csv); !s.ok()) {
    return s;
  }
  if (absl::Status s = WriteFile(*out_dir / "attack.json", root.dump(2) + "\n");
      !s.ok()) {
    return s;
  }
  return report;
}

}  // namespace ngram_dp
