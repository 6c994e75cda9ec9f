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

// ngram-dp: command-line front end.
//
// Exit codes: 0 success, 1 config error, 2 data error, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ngram_dp/config.h"
#include "ngram_dp/counts_io.h"
#include "ngram_dp/experiment.h"

namespace ngram_dp {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

int ExitCode(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
      return kExitConfig;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kDataLoss:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return kExitData;
    default:
      return kExitNumerical;
  }
}

int Fail(const absl::Status& status) {
  std::cerr << "ngram-dp: " << status << "\n";
  return ExitCode(status);
}

struct LoadedConfig {
  ExperimentConfig config;
  std::string base_dir;
};

absl::StatusOr<LoadedConfig> LoadConfig(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFileToString(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<ExperimentConfig> config = ParseConfig(*text);
  if (!config.ok()) return config.status();
  return LoadedConfig{*std::move(config),
                      std::filesystem::path(path).parent_path().string()};
}

int RunIngest(const std::string& vocab_path, const std::string& input,
              const std::string& output, bool is_public) {
  absl::StatusOr<std::string> vocab_text = ReadFileToString(vocab_path);
  if (!vocab_text.ok()) return Fail(vocab_text.status());
  std::istringstream vocab_in(*vocab_text);
  absl::StatusOr<Vocabulary> vocabulary = ReadVocabulary(vocab_in);
  if (!vocabulary.ok()) return Fail(vocabulary.status());
  auto shared = std::make_shared<const Vocabulary>(*std::move(vocabulary));
  absl::StatusOr<std::string> corpus = ReadFileToString(input);
  if (!corpus.ok()) return Fail(corpus.status());
  std::istringstream in(*corpus);
  std::ostringstream out;
  if (is_public) {
    const NgramCounts counts = CountCorpus(in, shared->order());
    std::vector<double> alpha(shared->size(), 0.0);
    size_t dropped = 0;
    for (const auto& [ngram, count] : counts) {
      std::optional<uint32_t> index = shared->Find(ngram);
      if (index.has_value()) {
        alpha[*index] = static_cast<double>(count);
      } else {
        dropped += static_cast<size_t>(count);
      }
    }
    if (absl::Status s = WritePublicCounts(alpha, *shared, out); !s.ok()) {
      return Fail(s);
    }
    std::cout << "public n-grams dropped as out-of-vocabulary: " << dropped
              << "\n";
  } else {
    IngestStats stats;
    absl::StatusOr<CountsDatabase> db = IngestUserCorpus(in, shared, &stats);
    if (!db.ok()) return Fail(db.status());
    if (absl::Status s = WriteCounts(*db, out); !s.ok()) return Fail(s);
    std::cout << "users: " << db->num_users() << ", n-grams: " << stats.records
              << ", out-of-vocabulary: " << stats.out_of_vocabulary << "\n";
  }
  return Fail(WriteStringToFile(output, out.str()));
}

int RunVocab(const std::string& input, int order,
             std::optional<size_t> max_size, const std::string& output) {
  absl::StatusOr<std::string> corpus = ReadFileToString(input);
  if (!corpus.ok()) return Fail(corpus.status());
  std::istringstream in(*corpus);
  absl::StatusOr<Vocabulary> vocabulary =
      Vocabulary::FromCounts(CountCorpus(in, order), order, max_size);
  if (!vocabulary.ok()) return Fail(vocabulary.status());
  std::ostringstream out;
  if (absl::Status s = WriteVocabulary(*vocabulary, out); !s.ok()) {
    return Fail(s);
  }
  std::cout << "vocabulary size: " << vocabulary->size() << "\n";
  return Fail(WriteStringToFile(output, out.str()));
}

int RunRelease(const std::string& config_path,
               const std::optional<std::string>& mechanism,
               const std::optional<std::string>& output_dir) {
  absl::StatusOr<LoadedConfig> loaded = LoadConfig(config_path);
  if (!loaded.ok()) return Fail(loaded.status());
  if (mechanism.has_value()) loaded->config.mechanism.name = *mechanism;
  if (output_dir.has_value()) loaded->config.output_dir = *output_dir;
  absl::StatusOr<RunManifest> manifest =
      RunExperiment(loaded->config, loaded->base_dir);
  if (!manifest.ok()) return Fail(manifest.status());
  for (const auto& [name, path] : manifest->artifacts) {
    std::cout << name << ": " << path << "\n";
  }
  return kExitOk;
}

int RunEval(const std::string& config_path, const std::string& release_path,
            const std::optional<std::string>& output) {
  absl::StatusOr<LoadedConfig> loaded = LoadConfig(config_path);
  if (!loaded.ok()) return Fail(loaded.status());
  absl::StatusOr<std::string> text = ReadFileToString(release_path);
  if (!text.ok()) return Fail(text.status());
  absl::StatusOr<ReleasedDistribution> release = ReleaseFromJson(*text);
  if (!release.ok()) return Fail(release.status());
  absl::StatusOr<ExperimentData> data =
      LoadData(loaded->config.data, loaded->base_dir, loaded->config.seed);
  if (!data.ok()) return Fail(data.status());
  if (release->theta.size() != data->db.vocab_size()) {
    return Fail(absl::DataLossError(
        "release and data have different vocabulary sizes"));
  }
  // Budgets are read back from the release file, which took them from the
  // ledger of the run that produced it.
  PrivacyLedger ledger;
  if (release->epsilon_spent.has_value()) {
    ledger.Charge(release->mechanism, *release->epsilon_spent,
                  release->delta_spent.value_or(0.0));
  }
  absl::StatusOr<std::vector<EvalRow>> rows =
      Evaluate(*data, *release, ledger, loaded->config.eval);
  if (!rows.ok()) return Fail(rows.status());
  std::string csv = std::string(kCsvHeader) + "\n";
  for (const EvalRow& row : *rows) csv += FormatCsvRow(row) + "\n";
  if (output.has_value()) return Fail(WriteStringToFile(*output, csv));
  std::cout << csv;
  return kExitOk;
}

int RunAttackCommand(const std::string& config_path) {
  absl::StatusOr<LoadedConfig> loaded = LoadConfig(config_path);
  if (!loaded.ok()) return Fail(loaded.status());
  absl::StatusOr<AttackReport> report =
      RunAttack(loaded->config, loaded->base_dir);
  if (!report.ok()) return Fail(report.status());
  std::cout << "removed user: " << report->removed_user_id << "\n";
  for (size_t i = 0; i < report->epsilons.size(); ++i) {
    std::cout << "epsilon " << FormatDouble(report->epsilons[i])
              << ": inference probability "
              << FormatDouble(report->probabilities[i]) << "\n";
  }
  return kExitOk;
}

int RunSweepCommand(const std::string& config_path) {
  absl::StatusOr<LoadedConfig> loaded = LoadConfig(config_path);
  if (!loaded.ok()) return Fail(loaded.status());
  absl::StatusOr<std::string> path = RunSweep(loaded->config, loaded->base_dir);
  if (!path.ok()) return Fail(path.status());
  std::cout << "sweep: " << *path << "\n";
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Differentially private n-gram distribution release"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LibraryVersion());

  std::string vocab_path, input, output, config_path, release_path;
  std::optional<std::string> mechanism, output_dir, eval_output;
  std::optional<size_t> max_size;
  int order = 3;
  bool is_public = false;

  CLI::App* ingest =
      app.add_subcommand("ingest", "Corpus -> per-user counts file");
  ingest->add_option("--vocab", vocab_path, "Vocabulary file")->required();
  ingest
      ->add_option("--input", input,
                   "user_id<TAB>sentence corpus (or plain sentences with "
                   "--public)")
      ->required();
  ingest->add_option("--output", output, "Counts file to write")->required();
  ingest->add_flag("--public", is_public,
                   "Input is a public corpus; write public counts");

  CLI::App* vocab =
      app.add_subcommand("vocab", "Public corpus -> vocabulary file");
  vocab->add_option("--input", input, "One sentence per line")->required();
  vocab->add_option("--order", order, "n-gram order")
      ->check(CLI::PositiveNumber);
  vocab->add_option("--max-size", max_size, "Keep the most frequent n-grams");
  vocab->add_option("--output", output, "Vocabulary file to write")->required();

  CLI::App* release = app.add_subcommand("release", "Run one mechanism");
  release->add_option("--config", config_path, "Experiment config")->required();
  release->add_option("--mechanism", mechanism, "Override mechanism.name");
  release->add_option("--output-dir", output_dir, "Override output_dir");

  CLI::App* tune =
      app.add_subcommand("tune", "Tuned end-to-end release over the grid");
  tune->add_option("--config", config_path, "Experiment config")->required();
  tune->add_option("--output-dir", output_dir, "Override output_dir");

  CLI::App* eval = app.add_subcommand("eval", "Score a release file");
  eval->add_option("--config", config_path, "Experiment config")->required();
  eval->add_option("--release", release_path, "release.json")->required();
  eval->add_option("--output", eval_output, "CSV path (default stdout)");

  CLI::App* attack = app.add_subcommand("attack", "Membership inference sweep");
  attack->add_option("--config", config_path, "Experiment config")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep");
  sweep->add_option("--config", config_path, "Experiment config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*ingest) return RunIngest(vocab_path, input, output, is_public);
  if (*vocab) return RunVocab(input, order, max_size, output);
  if (*release) return RunRelease(config_path, mechanism, output_dir);
  if (*tune) {
    return RunRelease(config_path, std::string(kEndToEndMechanism), output_dir);
  }
  if (*eval) return RunEval(config_path, release_path, eval_output);
  if (*attack) return RunAttackCommand(config_path);
  if (*sweep) return RunSweepCommand(config_path);
  return kExitConfig;
}

}  // namespace
}  // namespace ngram_dp

int main(int argc, char** argv) { return ngram_dp::Main(argc, argv); }
