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

#include "ngram_dp/synthetic.h"

#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "ngram_dp/counts_io.h"
#include "ngram_dp/random.h"
#include "ngram_dp/vocabulary.h"

namespace ngram_dp {
namespace {

template <typename T>
void ShuffleRange(std::vector<T>& v, size_t begin, Rng& rng) {
  for (size_t i = v.size(); i > begin + 1; --i) {
    const size_t j = begin + rng.UniformInt(i - begin);
    std::swap(v[i - 1], v[j]);
  }
}

// Successor sets and weights of a second-order chain, indexed by
// w1 * num_words + w2.
struct MarkovChain {
  size_t num_words = 0;
  std::vector<std::vector<size_t>> successors;
  std::discrete_distribution<size_t> pick;
};

std::vector<size_t> DrawSuccessors(size_t num_words, size_t branching,
                                   Rng& rng) {
  std::vector<size_t> words(num_words);
  for (size_t i = 0; i < num_words; ++i) words[i] = i;
  for (size_t i = 0; i < branching; ++i) {
    std::swap(words[i], words[i + rng.UniformInt(num_words - i)]);
  }
  words.resize(branching);
  return words;
}

std::string SampleSentence(const MarkovChain& chain, size_t length, Rng& rng) {
  std::discrete_distribution<size_t> pick = chain.pick;
  size_t w1 = rng.UniformInt(chain.num_words);
  size_t w2 = rng.UniformInt(chain.num_words);
  std::string sentence = absl::StrCat("w", w1, " w", w2);
  for (size_t i = 2; i < length; ++i) {
    const size_t next =
        chain.successors[w1 * chain.num_words + w2][pick(rng.engine())];
    absl::StrAppend(&sentence, " w", next);
    w1 = w2;
    w2 = next;
  }
  return sentence;
}

}  // namespace

std::vector<double> ZipfDistribution(size_t size, double exponent) {
  std::vector<double> p(size);
  double total = 0.0;
  for (size_t i = 0; i < size; ++i) {
    p[i] = std::pow(static_cast<double>(i + 1), -exponent);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

absl::StatusOr<SyntheticCorpus> GenerateSyntheticCorpus(
    const SyntheticCorpusParams& params, uint64_t seed) {
  if (params.num_users == 0 || params.vocab_size == 0 ||
      params.tokens_per_user == 0) {
    return absl::InvalidArgumentError(
        "synthetic corpus needs positive num_users, vocab_size and "
        "tokens_per_user");
  }
  if (!(params.zipf_exponent >= 0.0) ||
      !(params.public_tail_start >= 0.0 && params.public_tail_start <= 1.0)) {
    return absl::InvalidArgumentError(
        "zipf_exponent must be >= 0 and public_tail_start in [0, 1]");
  }
  const size_t v = params.vocab_size;
  std::vector<std::string> entries(v);
  for (size_t i = 0; i < v; ++i) entries[i] = absl::StrCat("t", i);
  absl::StatusOr<Vocabulary> vocabulary = Vocabulary::Create(entries, 1);
  if (!vocabulary.ok()) return vocabulary.status();
  auto shared = std::make_shared<const Vocabulary>(*std::move(vocabulary));

  std::vector<double> p = ZipfDistribution(v, params.zipf_exponent);
  std::discrete_distribution<size_t> private_pick(p.begin(), p.end());
  std::vector<UserContribution> users;
  users.reserve(params.num_users);
  for (size_t n = 0; n < params.num_users; ++n) {
    Rng rng(DeriveSeed(seed, "synthetic-user", n));
    std::map<uint32_t, int64_t> counts;
    for (size_t t = 0; t < params.tokens_per_user; ++t) {
      ++counts[static_cast<uint32_t>(private_pick(rng.engine()))];
    }
    UserContribution user;
    user.user_id = absl::StrFormat("u%07d", n);
    for (const auto& [index, count] : counts) {
      user.counts.push_back({index, count});
    }
    users.push_back(std::move(user));
  }
  absl::StatusOr<CountsDatabase> db =
      CountsDatabase::Create(shared, std::move(users));
  if (!db.ok()) return db.status();

  std::vector<double> q = p;
  Rng shuffle_rng(DeriveSeed(seed, "synthetic-public-shuffle"));
  ShuffleRange(
      q, static_cast<size_t>(params.public_tail_start * static_cast<double>(v)),
      shuffle_rng);
  const size_t public_tokens = params.public_tokens > 0
                                   ? params.public_tokens
                                   : params.num_users * params.tokens_per_user;
  std::discrete_distribution<size_t> public_pick(q.begin(), q.end());
  Rng public_rng(DeriveSeed(seed, "synthetic-public"));
  std::vector<double> alpha(v, 0.0);
  for (size_t t = 0; t < public_tokens; ++t) {
    alpha[public_pick(public_rng.engine())] += 1.0;
  }
  return SyntheticCorpus{*std::move(db), std::move(alpha), std::move(p)};
}

absl::StatusOr<MarkovCorpus> GenerateMarkovCorpus(
    const MarkovCorpusParams& params, uint64_t seed) {
  if (params.num_words < 2 || params.branching == 0 ||
      params.branching > params.num_words || params.sentence_length < 2 ||
      params.num_users == 0 || params.sentences_per_user == 0) {
    return absl::InvalidArgumentError(
        "Markov corpus needs num_words >= 2, 1 <= branching <= num_words, "
        "sentence_length >= 2 and positive user and sentence counts");
  }
  if (!(params.public_perturbation >= 0.0 &&
        params.public_perturbation <= 1.0)) {
    return absl::InvalidArgumentError("public_perturbation must lie in [0, 1]");
  }
  const size_t w = params.num_words;
  const std::vector<double> weights =
      ZipfDistribution(params.branching, params.zipf_exponent);

  MarkovChain private_chain;
  private_chain.num_words = w;
  private_chain.pick =
      std::discrete_distribution<size_t>(weights.begin(), weights.end());
  Rng chain_rng(DeriveSeed(seed, "markov-chain"));
  private_chain.successors.resize(w * w);
  for (auto& s : private_chain.successors) {
    s = DrawSuccessors(w, params.branching, chain_rng);
  }
  MarkovChain public_chain = private_chain;
  Rng perturb_rng(DeriveSeed(seed, "markov-public-chain"));
  for (auto& s : public_chain.successors) {
    if (perturb_rng.Uniform() < params.public_perturbation) {
      s = DrawSuccessors(w, params.branching, perturb_rng);
    }
  }

  MarkovCorpus corpus;
  corpus.private_lines.reserve(params.num_users * params.sentences_per_user);
  for (size_t u = 0; u < params.num_users; ++u) {
    Rng rng(DeriveSeed(seed, "markov-user", u));
    const std::string id = absl::StrFormat("u%07d", u);
    for (size_t k = 0; k < params.sentences_per_user; ++k) {
      corpus.private_lines.emplace_back(
          id, SampleSentence(private_chain, params.sentence_length, rng));
    }
  }
  Rng public_rng(DeriveSeed(seed, "markov-public"));
  for (size_t k = 0; k < params.public_sentences; ++k) {
    corpus.public_sentences.push_back(
        SampleSentence(public_chain, params.sentence_length, public_rng));
  }
  Rng heldout_rng(DeriveSeed(seed, "markov-heldout"));
  for (size_t k = 0; k < params.heldout_sentences; ++k) {
    corpus.heldout_sentences.push_back(
        SampleSentence(private_chain, params.sentence_length, heldout_rng));
  }
  return corpus;
}

absl::StatusOr<NgramDataset> BuildNgramDataset(const MarkovCorpus& corpus,
                                               int order) {
  NgramCounts public_counts;
  for (const std::string& sentence : corpus.public_sentences) {
    ExtractNgramsInto(sentence, order, public_counts);
  }
  absl::StatusOr<Vocabulary> vocabulary =
      Vocabulary::FromCounts(public_counts, order);
  if (!vocabulary.ok()) return vocabulary.status();
  if (vocabulary->size() == 0) {
    return absl::InvalidArgumentError("public corpus has no n-grams");
  }
  auto shared = std::make_shared<const Vocabulary>(*std::move(vocabulary));
  std::vector<double> alpha(shared->size());
  for (size_t i = 0; i < shared->size(); ++i) {
    alpha[i] =
        static_cast<double>(public_counts.find(shared->entry(i))->second);
  }
  std::ostringstream lines;
  for (const auto& [user, sentence] : corpus.private_lines) {
    lines << user << '\t' << sentence << '\n';
  }
  std::istringstream in(lines.str());
  absl::StatusOr<CountsDatabase> db = IngestUserCorpus(in, shared);
  if (!db.ok()) return db.status();
  return NgramDataset{*std::move(db), std::move(alpha)};
}

}  // namespace ngram_dp
