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

#ifndef NGRAM_DP_VOCABULARY_H_
#define NGRAM_DP_VOCABULARY_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"

namespace ngram_dp {

// n-gram -> occurrence count. Keys are the n tokens joined by single spaces.
// Ordered so that iteration (and anything serialized from it) is
// deterministic.
using NgramCounts = std::map<std::string, int64_t, std::less<>>;

// The fixed, ordered index space shared by every count vector in an
// experiment. Entries are distinct n-grams of one order; position in
// `entries()` is the vector index.
class Vocabulary {
 public:
  // Fails if `order` < 1, an entry is duplicated, or an entry does not have
  // exactly `order` space-separated tokens.
  static absl::StatusOr<Vocabulary> Create(std::vector<std::string> entries,
                                           int order);

  // Orders the n-grams of `counts` by descending count (ties broken
  // lexicographically) and keeps the first `max_size` of them.
  static absl::StatusOr<Vocabulary> FromCounts(
      const NgramCounts& counts, int order,
      std::optional<size_t> max_size = std::nullopt);

  size_t size() const { return entries_.size(); }
  int order() const { return order_; }
  const std::string& entry(size_t i) const { return entries_[i]; }
  std::span<const std::string> entries() const { return entries_; }

  std::optional<uint32_t> Find(std::string_view ngram) const;

 private:
  Vocabulary(std::vector<std::string> entries, int order,
             absl::flat_hash_map<std::string, uint32_t> index)
      : entries_(std::move(entries)), order_(order), index_(std::move(index)) {}

  std::vector<std::string> entries_;
  int order_;
  absl::flat_hash_map<std::string, uint32_t> index_;
};

}  // namespace ngram_dp

#endif  // NGRAM_DP_VOCABULARY_H_
