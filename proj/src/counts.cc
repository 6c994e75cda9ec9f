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

#include "ngram_dp/counts.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "ngram_dp/random.h"
#include "string_compat.h"

namespace ngram_dp {

void ExtractNgramsInto(std::string_view text, int n, NgramCounts& counts) {
  if (n < 1) return;
  const std::string lowered = absl::AsciiStrToLower(ToAbsl(text));
  for (absl::string_view sentence : absl::StrSplit(lowered, '\n')) {
    std::vector<absl::string_view> tokens =
        absl::StrSplit(sentence, absl::ByAnyChar(" \t\r"), absl::SkipEmpty());
    const size_t order = static_cast<size_t>(n);
    if (tokens.size() < order) continue;
    for (size_t i = 0; i + order <= tokens.size(); ++i) {
      std::string key =
          absl::StrJoin(tokens.begin() + i, tokens.begin() + i + order, " ");
      ++counts[std::move(key)];
    }
  }
}

NgramCounts ExtractNgrams(std::string_view text, int n) {
  NgramCounts counts;
  ExtractNgramsInto(text, n, counts);
  return counts;
}

int64_t UserContribution::Total() const {
  int64_t total = 0;
  for (const SparseEntry& e : counts) total += e.count;
  return total;
}

int64_t UserContribution::MaxCount() const {
  int64_t m = 0;
  for (const SparseEntry& e : counts) m = std::max(m, e.count);
  return m;
}

std::vector<int64_t> UserContribution::ToDense(size_t vocab_size) const {
  std::vector<int64_t> dense(vocab_size, 0);
  for (const SparseEntry& e : counts) dense[e.index] = e.count;
  return dense;
}

absl::StatusOr<UserContribution> UserContribution::FromEntries(
    std::string user_id, std::vector<SparseEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) {
              return a.index < b.index;
            });
  std::vector<SparseEntry> kept;
  kept.reserve(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].count < 0) {
      return absl::DataLossError(
          absl::StrFormat("user \"%s\": negative count %d at index %d", user_id,
                          entries[i].count, entries[i].index));
    }
    if (i > 0 && entries[i].index == entries[i - 1].index) {
      return absl::DataLossError(absl::StrFormat(
          "user \"%s\": index %d given twice", user_id, entries[i].index));
    }
    if (entries[i].count > 0) kept.push_back(entries[i]);
  }
  return UserContribution{std::move(user_id), std::move(kept)};
}

UserContribution UserContribution::FromDense(std::string user_id,
                                             std::span<const int64_t> dense) {
  UserContribution user{std::move(user_id), {}};
  for (size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] > 0) {
      user.counts.push_back({static_cast<uint32_t>(i), dense[i]});
    }
  }
  return user;
}

UserContribution ApplyContributionLimits(const UserContribution& user,
                                         int64_t max_count, int64_t max_total) {
  UserContribution out{user.user_id, user.counts};
  int64_t total = 0;
  for (SparseEntry& e : out.counts) {
    e.count = std::min(e.count, max_count);
    total += e.count;
  }
  if (total <= max_total) return out;

  std::vector<size_t> order(out.counts.size());
  std::iota(order.begin(), order.end(), size_t{0});
  // Entries are already sorted by index, so a stable sort on count gives the
  // index tie-break.
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return out.counts[a].count < out.counts[b].count;
  });
  std::vector<bool> dropped(out.counts.size(), false);
  for (size_t k : order) {
    if (total <= max_total) break;
    total -= out.counts[k].count;
    dropped[k] = true;
  }
  std::vector<SparseEntry> kept;
  kept.reserve(out.counts.size());
  for (size_t k = 0; k < out.counts.size(); ++k) {
    if (!dropped[k]) kept.push_back(out.counts[k]);
  }
  out.counts = std::move(kept);
  return out;
}

Aggregates Aggregate(std::span<const UserContribution> users,
                     size_t vocab_size) {
  Aggregates agg{std::vector<int64_t>(vocab_size, 0),
                 std::vector<int64_t>(vocab_size, 0)};
  for (const UserContribution& user : users) {
    for (const SparseEntry& e : user.counts) {
      agg.totals[e.index] += e.count;
      if (e.count > 0) ++agg.supports[e.index];
    }
  }
  return agg;
}

absl::StatusOr<CountsDatabase> CountsDatabase::Create(
    std::shared_ptr<const Vocabulary> vocabulary,
    std::vector<UserContribution> users) {
  if (vocabulary == nullptr) {
    return absl::InvalidArgumentError("vocabulary must not be null");
  }
  const size_t vocab_size = vocabulary->size();
  absl::flat_hash_map<std::string, size_t> user_index;
  user_index.reserve(users.size());
  for (size_t u = 0; u < users.size(); ++u) {
    auto [it, inserted] = user_index.emplace(users[u].user_id, u);
    if (!inserted) {
      return absl::DataLossError(
          absl::StrFormat("duplicate user id \"%s\"", users[u].user_id));
    }
    uint32_t previous = 0;
    for (size_t k = 0; k < users[u].counts.size(); ++k) {
      const SparseEntry& e = users[u].counts[k];
      if (e.index >= vocab_size) {
        return absl::DataLossError(absl::StrFormat(
            "user \"%s\": index %d outside vocabulary of size %d",
            users[u].user_id, e.index, vocab_size));
      }
      if (e.count <= 0 || (k > 0 && e.index <= previous)) {
        return absl::DataLossError(absl::StrFormat(
            "user \"%s\": counts must be positive and strictly sorted by "
            "index",
            users[u].user_id));
      }
      previous = e.index;
    }
  }
  Aggregates aggregates = Aggregate(users, vocab_size);
  return CountsDatabase(std::move(vocabulary), std::move(users),
                        std::move(aggregates), std::move(user_index));
}

std::optional<size_t> CountsDatabase::FindUser(std::string_view user_id) const {
  auto it = user_index_.find(ToAbsl(user_id));
  if (it == user_index_.end()) return std::nullopt;
  return it->second;
}

CountsDatabase CountsDatabase::WithContributionLimits(int64_t max_count,
                                                      int64_t max_total) const {
  std::vector<UserContribution> limited;
  limited.reserve(users_.size());
  for (const UserContribution& user : users_) {
    limited.push_back(ApplyContributionLimits(user, max_count, max_total));
  }
  Aggregates aggregates = Aggregate(limited, vocab_size());
  return CountsDatabase(vocabulary_, std::move(limited), std::move(aggregates),
                        user_index_);
}

absl::StatusOr<CountsDatabase> CountsDatabase::WithoutUser(
    std::string_view user_id) const {
  std::optional<size_t> removed = FindUser(user_id);
  if (!removed.has_value()) {
    return absl::NotFoundError(
        absl::StrFormat("cannot build adjacent database: unknown user \"%s\"",
                        ToAbsl(user_id)));
  }
  std::vector<size_t> kept;
  kept.reserve(users_.size());
  for (size_t u = 0; u < users_.size(); ++u) {
    if (u != *removed) kept.push_back(u);
  }
  return Subset(kept);
}

CountsDatabase CountsDatabase::Subset(std::span<const size_t> indices) const {
  std::vector<UserContribution> users;
  users.reserve(indices.size());
  absl::flat_hash_map<std::string, size_t> user_index;
  user_index.reserve(indices.size());
  for (size_t u : indices) {
    user_index.emplace(users_[u].user_id, users.size());
    users.push_back(users_[u]);
  }
  Aggregates aggregates = Aggregate(users, vocab_size());
  return CountsDatabase(vocabulary_, std::move(users), std::move(aggregates),
                        std::move(user_index));
}

absl::StatusOr<Aggregates> RemoveUser(const CountsDatabase& db,
                                      std::string_view user_id) {
  std::optional<size_t> u = db.FindUser(user_id);
  if (!u.has_value()) {
    return absl::NotFoundError(absl::StrFormat(
        "invalid adjacency request: unknown user \"%s\"", ToAbsl(user_id)));
  }
  Aggregates out = db.aggregates();
  for (const SparseEntry& e : db.user(*u).counts) {
    out.totals[e.index] -= e.count;
    if (e.count > 0) --out.supports[e.index];
  }
  return out;
}

absl::StatusOr<DatasetSplit> SplitDataset(const CountsDatabase& db,
                                          double fraction, uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("split fraction must lie in (0, 1), got %g", fraction));
  }
  const size_t n = db.num_users();
  // The small offset keeps e.g. 0.9 * 10 from rounding up to 10.
  const size_t train_size = std::min(
      n,
      static_cast<size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));

  std::vector<size_t> permutation(n);
  std::iota(permutation.begin(), permutation.end(), size_t{0});
  Rng rng(seed);
  for (size_t i = n; i > 1; --i) {
    std::swap(permutation[i - 1], permutation[rng.UniformInt(i)]);
  }
  std::vector<size_t> train(permutation.begin(),
                            permutation.begin() + train_size);
  std::vector<size_t> validation(permutation.begin() + train_size,
                                 permutation.end());
  std::sort(train.begin(), train.end());
  std::sort(validation.begin(), validation.end());
  return DatasetSplit{db.Subset(train), db.Subset(validation)};
}

}  // namespace ngram_dp
