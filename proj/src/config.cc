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

#include "ngram_dp/config.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <type_traits>

#include "absl/strings/str_format.h"
#include "json.hpp"
#include "ngram_dp/mechanisms.h"
#include "string_compat.h"

namespace ngram_dp {
namespace {

using nlohmann::json;

absl::Status FieldError(std::string_view path, std::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrFormat("%s: %s", ToAbsl(path), ToAbsl(message)));
}

template <typename T>
absl::StatusOr<T> Convert(const json& v, std::string_view path) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) return FieldError(path, "expected a boolean");
    return v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) return FieldError(path, "expected a string");
    return v.get<std::string>();
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) return FieldError(path, "expected a number");
    return v.get<double>();
  } else if constexpr (std::is_same_v<T, int64_t> || std::is_same_v<T, int>) {
    if (!v.is_number_integer()) return FieldError(path, "expected an integer");
    return v.get<T>();
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!v.is_number_unsigned()) {
      return FieldError(path, "expected a non-negative integer");
    }
    return v.get<T>();
  } else {
    static_assert(sizeof(T) == 0, "unsupported config field type");
  }
}

template <typename T>
absl::StatusOr<std::vector<T>> ConvertArray(const json& v,
                                            std::string_view path) {
  if (!v.is_array()) return FieldError(path, "expected an array");
  std::vector<T> out;
  for (size_t i = 0; i < v.size(); ++i) {
    absl::StatusOr<T> item =
        Convert<T>(v[i], absl::StrFormat("%s[%d]", ToAbsl(path), i));
    if (!item.ok()) return item.status();
    out.push_back(*std::move(item));
  }
  return out;
}

// Reads the members of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path)
      : object_(object), path_(std::move(path)) {}

  absl::Status CheckObject() const {
    if (!object_.is_object()) return FieldError(Name(), "expected an object");
    return absl::OkStatus();
  }

  std::string Child(std::string_view key) const {
    return path_.empty() ? std::string(key)
                         : absl::StrFormat("%s.%s", path_, ToAbsl(key));
  }

  const json* Find(std::string_view key) {
    seen_.insert(std::string(key));
    auto it = object_.find(std::string(key));
    return it == object_.end() ? nullptr : &*it;
  }

  template <typename T>
  absl::Status Read(std::string_view key, T& out) {
    const json* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    absl::StatusOr<T> value = Convert<T>(*v, Child(key));
    if (!value.ok()) return value.status();
    out = *std::move(value);
    return absl::OkStatus();
  }

  template <typename T>
  absl::Status Read(std::string_view key, std::optional<T>& out) {
    const json* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    absl::StatusOr<T> value = Convert<T>(*v, Child(key));
    if (!value.ok()) return value.status();
    out = *std::move(value);
    return absl::OkStatus();
  }

  template <typename T>
  absl::Status Read(std::string_view key, std::vector<T>& out) {
    const json* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    absl::StatusOr<std::vector<T>> value = ConvertArray<T>(*v, Child(key));
    if (!value.ok()) return value.status();
    out = *std::move(value);
    return absl::OkStatus();
  }

  absl::Status Finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      if (!seen_.contains(it.key())) {
        return FieldError(Child(it.key()), "unknown key");
      }
    }
    return absl::OkStatus();
  }

 private:
  std::string Name() const { return path_.empty() ? "<root>" : path_; }

  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

#define NGRAM_DP_RETURN_IF_ERROR(expr) \
  do {                                 \
    absl::Status status_ = (expr);     \
    if (!status_.ok()) return status_; \
  } while (false)

absl::Status ParseSynthetic(ObjectReader& r, SyntheticConfig& c) {
  NGRAM_DP_RETURN_IF_ERROR(r.CheckObject());
  NGRAM_DP_RETURN_IF_ERROR(r.Read("num_users", c.num_users));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("vocab_size", c.vocab_size));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("zipf_exponent", c.zipf_exponent));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("tokens_per_user", c.tokens_per_user));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("public_tokens", c.public_tokens));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("public_tail_start", c.public_tail_start));
  return r.Finish();
}

absl::Status ParseMarkov(ObjectReader& r, MarkovConfig& c) {
  NGRAM_DP_RETURN_IF_ERROR(r.CheckObject());
  MarkovCorpusParams& p = c.params;
  NGRAM_DP_RETURN_IF_ERROR(r.Read("num_users", p.num_users));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("num_words", p.num_words));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("branching", p.branching));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("zipf_exponent", p.zipf_exponent));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("sentences_per_user", p.sentences_per_user));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("sentence_length", p.sentence_length));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("public_sentences", p.public_sentences));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("heldout_sentences", p.heldout_sentences));
  NGRAM_DP_RETURN_IF_ERROR(
      r.Read("public_perturbation", p.public_perturbation));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("order", c.order));
  return r.Finish();
}

absl::Status ParseData(ObjectReader& r, DataConfig& c) {
  NGRAM_DP_RETURN_IF_ERROR(r.CheckObject());
  if (const json* v = r.Find("synthetic")) {
    ObjectReader sub(*v, r.Child("synthetic"));
    c.synthetic.emplace();
    NGRAM_DP_RETURN_IF_ERROR(ParseSynthetic(sub, *c.synthetic));
  }
  if (const json* v = r.Find("markov")) {
    ObjectReader sub(*v, r.Child("markov"));
    c.markov.emplace();
    NGRAM_DP_RETURN_IF_ERROR(ParseMarkov(sub, *c.markov));
  }
  NGRAM_DP_RETURN_IF_ERROR(r.Read("vocabulary", c.vocabulary));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("counts", c.counts));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("public_counts", c.public_counts));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("heldout", c.heldout));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("public_noise", c.public_noise));
  return r.Finish();
}

absl::Status ParseMechanism(ObjectReader& r, MechanismConfig& c) {
  NGRAM_DP_RETURN_IF_ERROR(r.CheckObject());
  NGRAM_DP_RETURN_IF_ERROR(r.Read("name", c.name));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("epsilon", c.epsilon));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("delta", c.delta));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("S", c.s));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("C", c.max_count));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("T", c.max_total));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("rho", c.rho));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("sensitivity", c.sensitivity));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("K", c.k));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("epsilon1", c.epsilon1));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("epsilon2", c.epsilon2));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("validation_C", c.validation_max_count));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("train_fraction", c.train_fraction));
  return r.Finish();
}

absl::Status ParseRoot(ObjectReader& r, ExperimentConfig& c) {
  NGRAM_DP_RETURN_IF_ERROR(r.CheckObject());
  NGRAM_DP_RETURN_IF_ERROR(r.Read("seed", c.seed));
  NGRAM_DP_RETURN_IF_ERROR(r.Read("output_dir", c.output_dir));
  const json* data = r.Find("data");
  if (data == nullptr) return FieldError("data", "required");
  {
    ObjectReader sub(*data, "data");
    NGRAM_DP_RETURN_IF_ERROR(ParseData(sub, c.data));
  }
  if (const json* v = r.Find("mechanism")) {
    ObjectReader sub(*v, "mechanism");
    NGRAM_DP_RETURN_IF_ERROR(ParseMechanism(sub, c.mechanism));
  }
  if (const json* v = r.Find("grid")) {
    ObjectReader sub(*v, "grid");
    NGRAM_DP_RETURN_IF_ERROR(sub.CheckObject());
    c.grid.emplace();
    NGRAM_DP_RETURN_IF_ERROR(sub.Read("S", c.grid->s));
    NGRAM_DP_RETURN_IF_ERROR(sub.Read("rho", c.grid->rho));
    NGRAM_DP_RETURN_IF_ERROR(sub.Finish());
  }
  if (const json* v = r.Find("eval")) {
    ObjectReader sub(*v, "eval");
    NGRAM_DP_RETURN_IF_ERROR(sub.CheckObject());
    NGRAM_DP_RETURN_IF_ERROR(sub.Read("kl", c.eval.kl));
    NGRAM_DP_RETURN_IF_ERROR(sub.Read("perplexity", c.eval.perplexity));
    NGRAM_DP_RETURN_IF_ERROR(sub.Finish());
  }
  if (const json* v = r.Find("attack")) {
    ObjectReader sub(*v, "attack");
    NGRAM_DP_RETURN_IF_ERROR(sub.CheckObject());
    c.attack.emplace();
    NGRAM_DP_RETURN_IF_ERROR(sub.Read("epsilons", c.attack->epsilons));
    NGRAM_DP_RETURN_IF_ERROR(sub.Read("trials", c.attack->trials));
    NGRAM_DP_RETURN_IF_ERROR(sub.Finish());
  }
  if (const json* v = r.Find("sweep")) {
    ObjectReader sub(*v, "sweep");
    NGRAM_DP_RETURN_IF_ERROR(sub.CheckObject());
    c.sweep.emplace();
    NGRAM_DP_RETURN_IF_ERROR(sub.Read("variable", c.sweep->variable));
    NGRAM_DP_RETURN_IF_ERROR(sub.Read("values", c.sweep->values));
    NGRAM_DP_RETURN_IF_ERROR(sub.Read("mechanisms", c.sweep->mechanisms));
    NGRAM_DP_RETURN_IF_ERROR(sub.Read("seeds", c.sweep->seeds));
    NGRAM_DP_RETURN_IF_ERROR(sub.Finish());
  }
  return r.Finish();
}

template <typename T>
void PutOptional(json& j, const char* key, const std::optional<T>& v) {
  if (v.has_value()) j[key] = *v;
}

bool IsKnownMechanism(std::string_view name) {
  static constexpr std::string_view kNames[] = {kBayesianMechanism,
                                                kLaplaceMechanism,
                                                kModifiedLaplaceMechanism,
                                                kKAnonymityMechanism,
                                                kPublicMechanism,
                                                kEndToEndMechanism,
                                                "private"};
  return std::find(std::begin(kNames), std::end(kNames), name) !=
         std::end(kNames);
}

bool Finite(double v) { return std::isfinite(v); }

absl::Status ValidateMechanism(const MechanismConfig& m) {
  if (!IsKnownMechanism(m.name)) {
    return FieldError("mechanism.name",
                      absl::StrFormat("unknown mechanism \"%s\"", m.name));
  }
  if (!(m.epsilon > 0.0) || !Finite(m.epsilon)) {
    return FieldError("mechanism.epsilon", "must be finite and > 0");
  }
  if (m.delta.has_value() && !(*m.delta > 0.0 && *m.delta < 1.0)) {
    return FieldError("mechanism.delta", "must lie in (0, 1)");
  }
  if (m.s.has_value() && (!(*m.s > 0.0) || !Finite(*m.s))) {
    return FieldError("mechanism.S", "must be finite and > 0");
  }
  if (m.max_count.has_value() && *m.max_count < 1) {
    return FieldError("mechanism.C", "must be >= 1");
  }
  if (m.max_total.has_value() && *m.max_total < 1) {
    return FieldError("mechanism.T", "must be >= 1");
  }
  if (m.rho.has_value() && !(*m.rho > 0.0 && *m.rho <= 1.0)) {
    return FieldError("mechanism.rho", "must lie in (0, 1]");
  }
  if (m.sensitivity.has_value()) {
    absl::StatusOr<SensitivityMethod> method =
        ParseSensitivityMethod(*m.sensitivity);
    if (!method.ok()) {
      return FieldError("mechanism.sensitivity",
                        ToStd(method.status().message()));
    }
  }
  if (m.k.has_value() && *m.k < 1) {
    return FieldError("mechanism.K", "must be >= 1");
  }
  if (m.validation_max_count.has_value() && *m.validation_max_count < 1) {
    return FieldError("mechanism.validation_C", "must be >= 1");
  }
  if (m.train_fraction.has_value() &&
      !(*m.train_fraction > 0.0 && *m.train_fraction < 1.0)) {
    return FieldError("mechanism.train_fraction", "must lie in (0, 1)");
  }
  const bool split_given = m.epsilon1.has_value() || m.epsilon2.has_value();
  if (split_given && m.name != kEndToEndMechanism) {
    return FieldError(
        m.epsilon1.has_value() ? "mechanism.epsilon1" : "mechanism.epsilon2",
        "budget split only applies to end-to-end");
  }
  for (const auto& [name, value] :
       {std::pair{"mechanism.epsilon1", m.epsilon1},
        std::pair{"mechanism.epsilon2", m.epsilon2}}) {
    if (value.has_value() && (!(*value > 0.0) || !(*value < m.epsilon))) {
      return FieldError(name, "must lie in (0, epsilon)");
    }
  }
  if (m.epsilon1.has_value() && m.epsilon2.has_value()) {
    const double sum = *m.epsilon1 + *m.epsilon2;
    if (std::fabs(sum - m.epsilon) > 1e-9 * m.epsilon) {
      return FieldError(
          "mechanism.epsilon1",
          absl::StrFormat("budget split %g + %g does not sum to epsilon %g",
                          *m.epsilon1, *m.epsilon2, m.epsilon));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidateConfig(const ExperimentConfig& config) {
  const DataConfig& d = config.data;
  const bool files = d.vocabulary.has_value() || d.counts.has_value() ||
                     d.public_counts.has_value();
  const int sources = static_cast<int>(d.synthetic.has_value()) +
                      static_cast<int>(d.markov.has_value()) +
                      static_cast<int>(files);
  if (sources != 1) {
    return FieldError("data",
                      "exactly one of synthetic, markov or "
                      "vocabulary/counts/public_counts is required");
  }
  if (files) {
    if (!d.vocabulary.has_value())
      return FieldError("data.vocabulary", "required");
    if (!d.counts.has_value()) return FieldError("data.counts", "required");
    if (!d.public_counts.has_value()) {
      return FieldError("data.public_counts", "required");
    }
  } else if (d.heldout.has_value()) {
    return FieldError("data.heldout", "only valid with file data");
  }
  if (d.synthetic.has_value()) {
    const SyntheticConfig& s = *d.synthetic;
    if (s.num_users == 0)
      return FieldError("data.synthetic.num_users", "must be > 0");
    if (s.vocab_size == 0)
      return FieldError("data.synthetic.vocab_size", "must be > 0");
    if (s.tokens_per_user == 0) {
      return FieldError("data.synthetic.tokens_per_user", "must be > 0");
    }
    if (!(s.zipf_exponent >= 0.0) || !Finite(s.zipf_exponent)) {
      return FieldError("data.synthetic.zipf_exponent", "must be >= 0");
    }
    if (!(s.public_tail_start >= 0.0 && s.public_tail_start <= 1.0)) {
      return FieldError("data.synthetic.public_tail_start",
                        "must lie in [0, 1]");
    }
  }
  if (d.markov.has_value()) {
    const MarkovCorpusParams& p = d.markov->params;
    if (d.markov->order < 1)
      return FieldError("data.markov.order", "must be >= 1");
    if (p.num_words < 2)
      return FieldError("data.markov.num_words", "must be >= 2");
    if (p.branching == 0 || p.branching > p.num_words) {
      return FieldError("data.markov.branching", "must lie in [1, num_words]");
    }
    if (p.sentence_length < 2) {
      return FieldError("data.markov.sentence_length", "must be >= 2");
    }
    if (p.num_users == 0)
      return FieldError("data.markov.num_users", "must be > 0");
    if (p.sentences_per_user == 0) {
      return FieldError("data.markov.sentences_per_user", "must be > 0");
    }
    if (!(p.public_perturbation >= 0.0 && p.public_perturbation <= 1.0)) {
      return FieldError("data.markov.public_perturbation",
                        "must lie in [0, 1]");
    }
  }
  if (d.public_noise.has_value() &&
      (!(*d.public_noise >= 0.0) || !Finite(*d.public_noise))) {
    return FieldError("data.public_noise", "must be finite and >= 0");
  }
  if (config.output_dir.empty()) return FieldError("output_dir", "must be set");
  NGRAM_DP_RETURN_IF_ERROR(ValidateMechanism(config.mechanism));
  if (config.grid.has_value()) {
    if (config.grid->s.empty())
      return FieldError("grid.S", "must be non-empty");
    if (config.grid->rho.empty())
      return FieldError("grid.rho", "must be non-empty");
    for (double s : config.grid->s) {
      if (!(s > 0.0) || !Finite(s))
        return FieldError("grid.S", "entries must be > 0");
    }
    for (double rho : config.grid->rho) {
      if (!(rho > 0.0 && rho <= 1.0)) {
        return FieldError("grid.rho", "entries must lie in (0, 1]");
      }
    }
  }
  if (config.eval.perplexity && !d.markov.has_value() &&
      !d.heldout.has_value()) {
    return FieldError("eval.perplexity",
                      "needs markov data or a data.heldout file");
  }
  if (config.attack.has_value()) {
    if (config.attack->epsilons.empty()) {
      return FieldError("attack.epsilons", "must be non-empty");
    }
    for (double e : config.attack->epsilons) {
      if (!(e > 0.0) || !Finite(e)) {
        return FieldError("attack.epsilons", "entries must be finite and > 0");
      }
    }
    if (config.attack->trials == 0)
      return FieldError("attack.trials", "must be > 0");
  }
  if (config.sweep.has_value()) {
    const SweepConfig& s = *config.sweep;
    const std::string& v = s.variable;
    if (v != "epsilon" && v != "users" && v != "vocab_size" &&
        v != "public_noise") {
      return FieldError("sweep.variable",
                        "must be epsilon, users, vocab_size or public_noise");
    }
    if ((v == "users" || v == "vocab_size") && !d.synthetic.has_value()) {
      return FieldError("sweep.variable",
                        absl::StrFormat("%s sweeps need synthetic data", v));
    }
    if (s.values.empty())
      return FieldError("sweep.values", "must be non-empty");
    for (double x : s.values) {
      const bool ok = v == "public_noise" ? (x >= 0.0 && Finite(x))
                      : v == "epsilon"    ? (x > 0.0 && Finite(x))
                                          : (x >= 1.0 && x == std::floor(x));
      if (!ok) {
        return FieldError("sweep.values",
                          absl::StrFormat("invalid value %g for %s", x, v));
      }
    }
    if (s.mechanisms.empty()) {
      return FieldError("sweep.mechanisms", "must be non-empty");
    }
    for (const std::string& m : s.mechanisms) {
      if (!IsKnownMechanism(m)) {
        return FieldError("sweep.mechanisms",
                          absl::StrFormat("unknown mechanism \"%s\"", m));
      }
    }
    if (s.seeds.empty()) return FieldError("sweep.seeds", "must be non-empty");
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentConfig> ParseConfig(std::string_view text) {
  json root = json::parse(text.begin(), text.end(), nullptr,
                          /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    return absl::InvalidArgumentError("config is not valid JSON");
  }
  ExperimentConfig config;
  ObjectReader reader(root, "");
  NGRAM_DP_RETURN_IF_ERROR(ParseRoot(reader, config));
  NGRAM_DP_RETURN_IF_ERROR(ValidateConfig(config));
  return config;
}

std::string SerializeConfig(const ExperimentConfig& c) {
  json root;
  root["seed"] = c.seed;
  root["output_dir"] = c.output_dir;

  json data = json::object();
  if (c.data.synthetic.has_value()) {
    const SyntheticConfig& s = *c.data.synthetic;
    data["synthetic"] = {{"num_users", s.num_users},
                         {"vocab_size", s.vocab_size},
                         {"zipf_exponent", s.zipf_exponent},
                         {"tokens_per_user", s.tokens_per_user},
                         {"public_tokens", s.public_tokens},
                         {"public_tail_start", s.public_tail_start}};
  }
  if (c.data.markov.has_value()) {
    const MarkovCorpusParams& p = c.data.markov->params;
    data["markov"] = {{"num_users", p.num_users},
                      {"num_words", p.num_words},
                      {"branching", p.branching},
                      {"zipf_exponent", p.zipf_exponent},
                      {"sentences_per_user", p.sentences_per_user},
                      {"sentence_length", p.sentence_length},
                      {"public_sentences", p.public_sentences},
                      {"heldout_sentences", p.heldout_sentences},
                      {"public_perturbation", p.public_perturbation},
                      {"order", c.data.markov->order}};
  }
  PutOptional(data, "vocabulary", c.data.vocabulary);
  PutOptional(data, "counts", c.data.counts);
  PutOptional(data, "public_counts", c.data.public_counts);
  PutOptional(data, "heldout", c.data.heldout);
  PutOptional(data, "public_noise", c.data.public_noise);
  root["data"] = data;

  const MechanismConfig& m = c.mechanism;
  json mech = {{"name", m.name}, {"epsilon", m.epsilon}};
  PutOptional(mech, "delta", m.delta);
  PutOptional(mech, "S", m.s);
  PutOptional(mech, "C", m.max_count);
  PutOptional(mech, "T", m.max_total);
  PutOptional(mech, "rho", m.rho);
  PutOptional(mech, "sensitivity", m.sensitivity);
  PutOptional(mech, "K", m.k);
  PutOptional(mech, "epsilon1", m.epsilon1);
  PutOptional(mech, "epsilon2", m.epsilon2);
  PutOptional(mech, "validation_C", m.validation_max_count);
  PutOptional(mech, "train_fraction", m.train_fraction);
  root["mechanism"] = mech;

  if (c.grid.has_value()) {
    root["grid"] = {{"S", c.grid->s}, {"rho", c.grid->rho}};
  }
  root["eval"] = {{"kl", c.eval.kl}, {"perplexity", c.eval.perplexity}};
  if (c.attack.has_value()) {
    root["attack"] = {{"epsilons", c.attack->epsilons},
                      {"trials", c.attack->trials}};
  }
  if (c.sweep.has_value()) {
    root["sweep"] = {{"variable", c.sweep->variable},
                     {"values", c.sweep->values},
                     {"mechanisms", c.sweep->mechanisms},
                     {"seeds", c.sweep->seeds}};
  }
  return root.dump(2) + "\n";
}

int64_t DefaultMaxCount(size_t num_users) {
  return num_users < 1'000'000 ? 1 : 10;
}

int64_t DefaultMaxTotal(size_t num_users) {
  return std::max<int64_t>(1, static_cast<int64_t>(num_users / 1000));
}

absl::StatusOr<ResolvedMechanism> ResolveMechanism(
    const ExperimentConfig& config, size_t num_users) {
  NGRAM_DP_RETURN_IF_ERROR(ValidateMechanism(config.mechanism));
  const MechanismConfig& m = config.mechanism;
  ResolvedMechanism r;
  r.name = m.name;
  r.epsilon = m.epsilon;
  r.delta = m.delta.value_or(1e-5);
  r.s = m.s.value_or(1.0);
  r.max_count = m.max_count.value_or(DefaultMaxCount(num_users));
  r.max_total = m.max_total.value_or(DefaultMaxTotal(num_users));
  r.rho = m.rho.value_or(0.5);
  if (m.sensitivity.has_value()) {
    absl::StatusOr<SensitivityMethod> method =
        ParseSensitivityMethod(*m.sensitivity);
    if (!method.ok()) return method.status();
    r.method = *method;
  }
  r.k = m.k.value_or(10);
  if (m.epsilon1.has_value() && m.epsilon2.has_value()) {
    r.epsilon1 = *m.epsilon1;
    r.epsilon2 = *m.epsilon2;
  } else if (m.epsilon1.has_value()) {
    r.epsilon1 = *m.epsilon1;
    r.epsilon2 = m.epsilon - *m.epsilon1;
  } else if (m.epsilon2.has_value()) {
    r.epsilon2 = *m.epsilon2;
    r.epsilon1 = m.epsilon - *m.epsilon2;
  } else {
    r.epsilon1 = m.epsilon / 3.0;
    r.epsilon2 = m.epsilon - r.epsilon1;
  }
  r.validation_max_count = m.validation_max_count.value_or(r.max_count);
  r.train_fraction = m.train_fraction.value_or(0.9);
  r.grid = config.grid.has_value()
               ? HyperGrid::Product(config.grid->s, config.grid->rho)
               : DefaultGrid();
  return r;
}

std::string ConfigHash(const ExperimentConfig& config) {
  const std::string canonical = SerializeConfig(config);
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return absl::StrFormat("%016x", hash);
}

}  // namespace ngram_dp
