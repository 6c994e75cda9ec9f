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

// Text formats (UTF-8, one record per line):
//
//   vocabulary file : one n-gram per line; line number is the index.
//   counts file     : user_id<TAB>n-gram tokens joined by space<TAB>count
//   user corpus     : user_id<TAB>sentence
//   public corpus   : one sentence per line
//
// Public counts use the counts-file layout; every row is summed regardless of
// its user id, and counts may be non-integral.
//
// N-grams outside the vocabulary are dropped on read.

#ifndef NGRAM_DP_COUNTS_IO_H_
#define NGRAM_DP_COUNTS_IO_H_

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ngram_dp/counts.h"
#include "ngram_dp/vocabulary.h"

namespace ngram_dp {

struct IngestStats {
  size_t records = 0;
  size_t out_of_vocabulary = 0;
};

absl::StatusOr<Vocabulary> ReadVocabulary(std::istream& in);
absl::Status WriteVocabulary(const Vocabulary& vocabulary, std::ostream& out);

absl::StatusOr<CountsDatabase> ReadCounts(
    std::istream& in, std::shared_ptr<const Vocabulary> vocabulary,
    IngestStats* stats = nullptr);
absl::Status WriteCounts(const CountsDatabase& db, std::ostream& out);

absl::StatusOr<std::vector<double>> ReadPublicCounts(
    std::istream& in, const Vocabulary& vocabulary,
    IngestStats* stats = nullptr);
absl::Status WritePublicCounts(std::span<const double> alpha,
                               const Vocabulary& vocabulary, std::ostream& out);

// Builds per-user n-gram counts from `user_id<TAB>sentence` lines. Users
// appear in order of first occurrence.
absl::StatusOr<CountsDatabase> IngestUserCorpus(
    std::istream& in, std::shared_ptr<const Vocabulary> vocabulary,
    IngestStats* stats = nullptr);

// Counts the n-grams of a plain-text corpus (one sentence per line).
NgramCounts CountCorpus(std::istream& in, int n);

// Reads every line of `in` (used for held-out sentence files).
std::vector<std::string> ReadLines(std::istream& in);

// Path-based wrappers; I/O failures become NotFound / DataLoss.
absl::StatusOr<std::string> ReadFileToString(const std::string& path);
absl::Status WriteStringToFile(const std::string& path,
                               std::string_view contents);

}  // namespace ngram_dp

#endif  // NGRAM_DP_COUNTS_IO_H_
