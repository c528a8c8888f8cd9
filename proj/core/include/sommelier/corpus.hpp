// Copyright 2026 The Sommelier Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sommelier {

inline constexpr int kMinPaperYear = 1900;
inline constexpr int kMaxPaperYear = 2100;

// One scholarly paper: its id, the merged author+journal keyword set after
// normalization (deduplicated, first-occurrence order) and publication year.
struct PaperRecord {
  std::string id;
  std::vector<std::string> keywords;
  int year = 0;
};

struct IngestIssue {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct Corpus {
  std::vector<PaperRecord> records;
  std::size_t dropped_empty = 0;      // records with no surviving keyword
  std::size_t dropped_keywords = 0;   // individual keywords that normalized to nothing
  std::vector<IngestIssue> issues;    // lines rejected outright
};

// Reads papers.jsonl. Malformed lines are recorded in `issues` and skipped.
Corpus ingest_papers(std::istream& in);
Corpus ingest_papers_file(const std::filesystem::path& path);

// Raw (unfiltered) term occurrence counts. Partial counts from disjoint
// partitions of a corpus combine with merge(); the result does not depend on
// how the corpus was partitioned.
class TermCounts {
 public:
  void add(const PaperRecord& record);
  void merge(const TermCounts& other);

  const std::map<std::string, std::uint64_t, std::less<>>& counts() const {
    return counts_;
  }

 private:
  std::map<std::string, std::uint64_t, std::less<>> counts_;
};

TermCounts count_terms(std::span<const PaperRecord> records);

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::map<std::string, std::uint64_t, std::less<>> entries,
             std::uint64_t min_count);

  // Keeps every term whose count is >= min_count.
  static Vocabulary from_counts(const TermCounts& counts,
                                std::uint64_t min_count);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(std::string_view term) const;
  std::uint64_t count(std::string_view term) const;  // 0 when absent
  std::uint64_t min_count() const { return min_count_; }

  const std::map<std::string, std::uint64_t, std::less<>>& entries() const {
    return entries_;
  }
  // Lexicographically sorted term list.
  std::vector<std::string> terms() const;
  // Descending count, ties broken by ascending term.
  std::vector<std::pair<std::string, std::uint64_t>> by_frequency() const;

  bool operator==(const Vocabulary&) const = default;

 private:
  std::map<std::string, std::uint64_t, std::less<>> entries_;
  std::uint64_t min_count_ = 1;
};

// Throws Error(kConfig) when min_count < 1 and Error(kInput) on an empty
// corpus. An empty result is returned with a logged warning.
Vocabulary build_vocabulary(const Corpus& corpus, long long min_count = 5);

// Same result as build_vocabulary, counted over `partitions` contiguous
// slices of the corpus on separate threads.
Vocabulary build_vocabulary_parallel(const Corpus& corpus, long long min_count,
                                     std::size_t partitions);

void write_vocabulary_tsv(std::ostream& out, const Vocabulary& vocabulary);
Vocabulary read_vocabulary_tsv(std::istream& in);
Vocabulary read_vocabulary_file(const std::filesystem::path& path);

}  // namespace sommelier
