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

// Synthetic stand-ins for private and public corpora.

#ifndef NGRAM_DP_SYNTHETIC_H_
#define NGRAM_DP_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "ngram_dp/counts.h"

namespace ngram_dp {

// Unigram corpus over tokens "t0".."t{V-1}" whose true distribution is
// Zipfian, p_i proportional to (i + 1)^-s.
struct SyntheticCorpusParams {
  size_t num_users = 1000;
  size_t vocab_size = 1000;
  double zipf_exponent = 1.0;
  size_t tokens_per_user = 20;
  // Public sample size; 0 means num_users * tokens_per_user.
  size_t public_tokens = 0;
  // Ranks at or beyond this fraction of V are shuffled in the public
  // distribution, so public and private agree on the head only.
  double public_tail_start = 0.1;
};

struct SyntheticCorpus {
  CountsDatabase db;
  std::vector<double> alpha;
  // The generating private distribution.
  std::vector<double> true_distribution;
};

std::vector<double> ZipfDistribution(size_t size, double exponent);

absl::StatusOr<SyntheticCorpus> GenerateSyntheticCorpus(
    const SyntheticCorpusParams& params, uint64_t seed);

// Sentences from a second-order Markov chain over "w0".."w{W-1}". Each
// two-word context has `branching` successors with Zipfian weights. The
// public chain re-draws the successor set of a `public_perturbation`
// fraction of contexts.
struct MarkovCorpusParams {
  size_t num_users = 2000;
  size_t num_words = 30;
  size_t branching = 4;
  double zipf_exponent = 1.0;
  size_t sentences_per_user = 4;
  size_t sentence_length = 8;
  size_t public_sentences = 20000;
  size_t heldout_sentences = 500;
  double public_perturbation = 0.3;

  friend bool operator==(const MarkovCorpusParams&,
                         const MarkovCorpusParams&) = default;
};

struct MarkovCorpus {
  // (user_id, sentence) pairs in user order.
  std::vector<std::pair<std::string, std::string>> private_lines;
  std::vector<std::string> public_sentences;
  // Fresh sentences from the private chain.
  std::vector<std::string> heldout_sentences;
};

absl::StatusOr<MarkovCorpus> GenerateMarkovCorpus(
    const MarkovCorpusParams& params, uint64_t seed);

// Vocabulary = all n-grams of the public sentences (by descending count),
// alpha = their public counts, db = the private lines over that vocabulary.
struct NgramDataset {
  CountsDatabase db;
  std::vector<double> alpha;
};

absl::StatusOr<NgramDataset> BuildNgramDataset(const MarkovCorpus& corpus,
                                               int order);

}  // namespace ngram_dp

#endif  // NGRAM_DP_SYNTHETIC_H_
