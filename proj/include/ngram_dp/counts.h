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

// Per-user n-gram counts: ingestion, contribution bounding, aggregation and
// construction of adjacent (one user removed) databases.

#ifndef NGRAM_DP_COUNTS_H_
#define NGRAM_DP_COUNTS_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "ngram_dp/vocabulary.h"

namespace ngram_dp {

inline constexpr int64_t kNoLimit = std::numeric_limits<int64_t>::max();

// Lowercases `text`, treats each newline-separated line as a sentence, splits
// it on spaces and counts every window of `n` consecutive tokens. Windows
// never span two sentences.
NgramCounts ExtractNgrams(std::string_view text, int n);

// As above, accumulating into `counts`.
void ExtractNgramsInto(std::string_view text, int n, NgramCounts& counts);

struct SparseEntry {
  uint32_t index;
  int64_t count;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// One user's counts over a vocabulary. Only non-zero counts are stored,
// sorted by vocabulary index.
struct UserContribution {
  std::string user_id;
  std::vector<SparseEntry> counts;

  int64_t Total() const;
  int64_t MaxCount() const;
  std::vector<int64_t> ToDense(size_t vocab_size) const;

  // Drops zeros and sorts by index. Fails on negative counts or repeated
  // indices.
  static absl::StatusOr<UserContribution> FromEntries(
      std::string user_id, std::vector<SparseEntry> entries);
  static UserContribution FromDense(std::string user_id,
                                    std::span<const int64_t> dense);
};

// Clamps every count to `max_count`; then, while the user's total exceeds
// `max_total`, drops whole n-grams in ascending order of clamped count (ties
// by ascending vocabulary index).
UserContribution ApplyContributionLimits(const UserContribution& user,
                                         int64_t max_count,
                                         int64_t max_total = kNoLimit);

// Dense per-word totals c and supports N (number of users with a non-zero
// count for the word).
struct Aggregates {
  std::vector<int64_t> totals;
  std::vector<int64_t> supports;

  friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

Aggregates Aggregate(std::span<const UserContribution> users,
                     size_t vocab_size);

class CountsDatabase {
 public:
  // Validates that user ids are unique and every index is inside the
  // vocabulary, then aggregates.
  static absl::StatusOr<CountsDatabase> Create(
      std::shared_ptr<const Vocabulary> vocabulary,
      std::vector<UserContribution> users);

  const Vocabulary& vocabulary() const { return *vocabulary_; }
  const std::shared_ptr<const Vocabulary>& shared_vocabulary() const {
    return vocabulary_;
  }
  size_t vocab_size() const { return vocabulary_->size(); }
  size_t num_users() const { return users_.size(); }
  std::span<const UserContribution> users() const { return users_; }
  const UserContribution& user(size_t i) const { return users_[i]; }
  std::span<const int64_t> totals() const { return aggregates_.totals; }
  std::span<const int64_t> supports() const { return aggregates_.supports; }
  const Aggregates& aggregates() const { return aggregates_; }

  std::optional<size_t> FindUser(std::string_view user_id) const;

  // Applies ApplyContributionLimits to every user and re-aggregates.
  CountsDatabase WithContributionLimits(int64_t max_count,
                                        int64_t max_total = kNoLimit) const;

  // The adjacent database with `user_id` removed.
  absl::StatusOr<CountsDatabase> WithoutUser(std::string_view user_id) const;

  // Sub-database made of the users at `indices` (in the given order).
  CountsDatabase Subset(std::span<const size_t> indices) const;

 private:
  CountsDatabase(std::shared_ptr<const Vocabulary> vocabulary,
                 std::vector<UserContribution> users, Aggregates aggregates,
                 absl::flat_hash_map<std::string, size_t> user_index)
      : vocabulary_(std::move(vocabulary)),
        users_(std::move(users)),
        aggregates_(std::move(aggregates)),
        user_index_(std::move(user_index)) {}

  std::shared_ptr<const Vocabulary> vocabulary_;
  std::vector<UserContribution> users_;
  Aggregates aggregates_;
  absl::flat_hash_map<std::string, size_t> user_index_;
};

// Totals and supports of the adjacent database without `user_id`, computed by
// subtraction. NotFound if the user is not in `db`.
absl::StatusOr<Aggregates> RemoveUser(const CountsDatabase& db,
                                      std::string_view user_id);

struct DatasetSplit {
  CountsDatabase train;
  CountsDatabase validation;
};

// User-level random split: ceil(fraction * |U|) users go to `train`, the rest
// to `validation`. Each side keeps the original user order.
absl::StatusOr<DatasetSplit> SplitDataset(const CountsDatabase& db,
                                          double fraction, uint64_t seed);

}  // namespace ngram_dp

#endif  // NGRAM_DP_COUNTS_H_
