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

#include "ngram_dp/vocabulary.h"

#include <algorithm>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "string_compat.h"

namespace ngram_dp {

absl::StatusOr<Vocabulary> Vocabulary::Create(std::vector<std::string> entries,
                                              int order) {
  if (order < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("n-gram order must be >= 1, got %d", order));
  }
  absl::flat_hash_map<std::string, uint32_t> index;
  index.reserve(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    std::vector<absl::string_view> tokens =
        absl::StrSplit(entries[i], ' ', absl::SkipEmpty());
    if (static_cast<int>(tokens.size()) != order) {
      return absl::DataLossError(absl::StrFormat(
          "vocabulary entry %d (\"%s\") has %d tokens, expected %d", i,
          entries[i], tokens.size(), order));
    }
    auto [it, inserted] = index.emplace(entries[i], static_cast<uint32_t>(i));
    if (!inserted) {
      return absl::DataLossError(
          absl::StrFormat("duplicate vocabulary entry \"%s\"", entries[i]));
    }
  }
  return Vocabulary(std::move(entries), order, std::move(index));
}

absl::StatusOr<Vocabulary> Vocabulary::FromCounts(
    const NgramCounts& counts, int order, std::optional<size_t> max_size) {
  std::vector<std::pair<std::string, int64_t>> ranked(counts.begin(),
                                                      counts.end());
  std::stable_sort(
      ranked.begin(), ranked.end(),
      [](const auto& a, const auto& b) { return a.second > b.second; });
  if (max_size.has_value() && ranked.size() > *max_size) {
    ranked.resize(*max_size);
  }
  std::vector<std::string> entries;
  entries.reserve(ranked.size());
  for (auto& [ngram, count] : ranked) entries.push_back(std::move(ngram));
  return Create(std::move(entries), order);
}

std::optional<uint32_t> Vocabulary::Find(std::string_view ngram) const {
  auto it = index_.find(ToAbsl(ngram));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace ngram_dp
