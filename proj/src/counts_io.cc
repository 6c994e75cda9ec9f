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

#include "ngram_dp/counts_io.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "string_compat.h"

namespace ngram_dp {
namespace {

struct CountsRecord {
  absl::string_view user_id;
  absl::string_view ngram;
  absl::string_view count;
};

absl::StatusOr<CountsRecord> SplitCountsLine(absl::string_view line,
                                             size_t line_number) {
  std::vector<absl::string_view> fields = absl::StrSplit(line, '\t');
  if (fields.size() != 3) {
    return absl::DataLossError(absl::StrFormat(
        "counts line %d: expected 3 tab-separated fields, got %d", line_number,
        fields.size()));
  }
  return CountsRecord{fields[0], fields[1], fields[2]};
}

// Tokens re-joined by single spaces, lowercased, so that lookups match
// ExtractNgrams keys.
std::string NormalizeNgram(absl::string_view ngram) {
  std::vector<absl::string_view> tokens =
      absl::StrSplit(ngram, absl::ByAnyChar(" \t\r"), absl::SkipEmpty());
  return absl::AsciiStrToLower(absl::StrJoin(tokens, " "));
}

bool NextLine(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

// Collects per-user sparse counts in order of first appearance of the user.
class UserAccumulator {
 public:
  std::map<uint32_t, int64_t>& For(absl::string_view user_id) {
    auto it = index_.find(user_id);
    if (it == index_.end()) {
      it = index_.emplace(std::string(user_id), order_.size()).first;
      order_.emplace_back(std::string(user_id), std::map<uint32_t, int64_t>());
    }
    return order_[it->second].second;
  }

  absl::StatusOr<CountsDatabase> Build(
      std::shared_ptr<const Vocabulary> vocabulary) && {
    std::vector<UserContribution> users;
    users.reserve(order_.size());
    for (auto& [user_id, counts] : order_) {
      UserContribution user{std::move(user_id), {}};
      for (const auto& [index, count] : counts) {
        if (count > 0) user.counts.push_back({index, count});
      }
      users.push_back(std::move(user));
    }
    return CountsDatabase::Create(std::move(vocabulary), std::move(users));
  }

 private:
  absl::flat_hash_map<std::string, size_t> index_;
  std::vector<std::pair<std::string, std::map<uint32_t, int64_t>>> order_;
};

}  // namespace

absl::StatusOr<Vocabulary> ReadVocabulary(std::istream& in) {
  std::vector<std::string> entries;
  std::string line;
  int order = 0;
  while (NextLine(in, line)) {
    std::string ngram = NormalizeNgram(line);
    if (ngram.empty()) continue;
    const int tokens =
        static_cast<int>(std::count(ngram.begin(), ngram.end(), ' ') + 1);
    if (order == 0) order = tokens;
    entries.push_back(std::move(ngram));
  }
  if (entries.empty()) {
    return absl::DataLossError("vocabulary file is empty");
  }
  return Vocabulary::Create(std::move(entries), order);
}

absl::Status WriteVocabulary(const Vocabulary& vocabulary, std::ostream& out) {
  for (const std::string& entry : vocabulary.entries()) out << entry << '\n';
  if (!out) return absl::DataLossError("failed writing vocabulary");
  return absl::OkStatus();
}

absl::StatusOr<CountsDatabase> ReadCounts(
    std::istream& in, std::shared_ptr<const Vocabulary> vocabulary,
    IngestStats* stats) {
  IngestStats local;
  UserAccumulator users;
  std::string line;
  size_t line_number = 0;
  while (NextLine(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    absl::StatusOr<CountsRecord> record = SplitCountsLine(line, line_number);
    if (!record.ok()) return record.status();
    int64_t count = 0;
    if (!absl::SimpleAtoi(record->count, &count) || count < 0) {
      return absl::DataLossError(absl::StrFormat(
          "counts line %d: invalid count \"%s\"", line_number, record->count));
    }
    ++local.records;
    std::map<uint32_t, int64_t>& user_counts = users.For(record->user_id);
    std::optional<uint32_t> index =
        vocabulary->Find(NormalizeNgram(record->ngram));
    if (!index.has_value()) {
      ++local.out_of_vocabulary;
      continue;
    }
    user_counts[*index] += count;
  }
  if (stats != nullptr) *stats = local;
  return std::move(users).Build(std::move(vocabulary));
}

absl::Status WriteCounts(const CountsDatabase& db, std::ostream& out) {
  const Vocabulary& vocabulary = db.vocabulary();
  for (const UserContribution& user : db.users()) {
    for (const SparseEntry& e : user.counts) {
      out << user.user_id << '\t' << vocabulary.entry(e.index) << '\t'
          << e.count << '\n';
    }
  }
  if (!out) return absl::DataLossError("failed writing counts");
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> ReadPublicCounts(
    std::istream& in, const Vocabulary& vocabulary, IngestStats* stats) {
  IngestStats local;
  std::vector<double> alpha(vocabulary.size(), 0.0);
  std::string line;
  size_t line_number = 0;
  while (NextLine(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    absl::StatusOr<CountsRecord> record = SplitCountsLine(line, line_number);
    if (!record.ok()) return record.status();
    double count = 0.0;
    if (!absl::SimpleAtod(record->count, &count) || !(count >= 0.0)) {
      return absl::DataLossError(
          absl::StrFormat("public counts line %d: invalid count \"%s\"",
                          line_number, record->count));
    }
    ++local.records;
    std::optional<uint32_t> index =
        vocabulary.Find(NormalizeNgram(record->ngram));
    if (!index.has_value()) {
      ++local.out_of_vocabulary;
      continue;
    }
    alpha[*index] += count;
  }
  if (stats != nullptr) *stats = local;
  return alpha;
}

absl::Status WritePublicCounts(std::span<const double> alpha,
                               const Vocabulary& vocabulary,
                               std::ostream& out) {
  if (alpha.size() != vocabulary.size()) {
    return absl::InvalidArgumentError(
        "public counts and vocabulary differ in length");
  }
  for (size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0.0) continue;
    out << "public\t" << vocabulary.entry(i) << '\t'
        << absl::StrFormat("%.17g", alpha[i]) << '\n';
  }
  if (!out) return absl::DataLossError("failed writing public counts");
  return absl::OkStatus();
}

absl::StatusOr<CountsDatabase> IngestUserCorpus(
    std::istream& in, std::shared_ptr<const Vocabulary> vocabulary,
    IngestStats* stats) {
  IngestStats local;
  UserAccumulator users;
  const int order = vocabulary->order();
  std::string line;
  size_t line_number = 0;
  while (NextLine(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::pair<absl::string_view, absl::string_view> fields =
        absl::StrSplit(line, absl::MaxSplits('\t', 1));
    if (line.find('\t') == std::string::npos) {
      return absl::DataLossError(absl::StrFormat(
          "corpus line %d: expected user_id<TAB>sentence", line_number));
    }
    std::map<uint32_t, int64_t>& user_counts = users.For(fields.first);
    for (const auto& [ngram, count] :
         ExtractNgrams(ToStd(fields.second), order)) {
      local.records += static_cast<size_t>(count);
      std::optional<uint32_t> index = vocabulary->Find(ngram);
      if (!index.has_value()) {
        local.out_of_vocabulary += static_cast<size_t>(count);
        continue;
      }
      user_counts[*index] += count;
    }
  }
  if (stats != nullptr) *stats = local;
  return std::move(users).Build(std::move(vocabulary));
}

NgramCounts CountCorpus(std::istream& in, int n) {
  NgramCounts counts;
  std::string line;
  while (NextLine(in, line)) ExtractNgramsInto(line, n, counts);
  return counts;
}

std::vector<std::string> ReadLines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (NextLine(in, line)) lines.push_back(line);
  return lines;
}

absl::StatusOr<std::string> ReadFileToString(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open \"%s\"", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteStringToFile(const std::string& path,
                               std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open \"%s\" for writing", path));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    return absl::DataLossError(absl::StrFormat("failed writing \"%s\"", path));
  }
  return absl::OkStatus();
}

}  // namespace ngram_dp
