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

#include "sommelier/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_set>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "sommelier/error.hpp"
#include "sommelier/io.hpp"
#include "sommelier/text.hpp"

namespace sommelier {
namespace {

using nlohmann::json;

void append_keywords(const json& array, const char* field,
                     std::vector<std::string>& keywords,
                     std::unordered_set<std::string>& seen,
                     std::size_t& dropped) {
  if (!array.is_array()) {
    throw Error(ErrorKind::kParse, std::string("\"") + field + "\" must be an array");
  }
  for (const json& item : array) {
    if (!item.is_string()) {
      throw Error(ErrorKind::kParse,
                  std::string("\"") + field + "\" must contain strings");
    }
    auto normalized = try_normalize_keyword(item.get<std::string>());
    if (!normalized) {
      ++dropped;
      continue;
    }
    if (seen.insert(*normalized).second) {
      keywords.push_back(*std::move(normalized));
    }
  }
}

PaperRecord parse_paper(std::string_view line, std::size_t& dropped_keywords) {
  json doc = json::parse(line.begin(), line.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::kParse, "not a JSON object");
  }
  PaperRecord record;
  auto id = doc.find("id");
  if (id == doc.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw Error(ErrorKind::kParse, "missing or empty \"id\"");
  }
  record.id = id->get<std::string>();

  auto year = doc.find("year");
  if (year == doc.end() || !year->is_number_integer()) {
    throw Error(ErrorKind::kParse, "missing or non-integer \"year\"");
  }
  const long long y = year->get<long long>();
  if (y < kMinPaperYear || y > kMaxPaperYear) {
    throw Error(ErrorKind::kParse, "year " + std::to_string(y) + " outside [" +
                                       std::to_string(kMinPaperYear) + ", " +
                                       std::to_string(kMaxPaperYear) + "]");
  }
  record.year = static_cast<int>(y);

  std::unordered_set<std::string> seen;
  auto keywords = doc.find("keywords");
  if (keywords == doc.end()) {
    throw Error(ErrorKind::kParse, "missing \"keywords\"");
  }
  append_keywords(*keywords, "keywords", record.keywords, seen, dropped_keywords);
  if (auto journal = doc.find("journal_keywords"); journal != doc.end()) {
    append_keywords(*journal, "journal_keywords", record.keywords, seen,
                    dropped_keywords);
  }
  return record;
}

}  // namespace

Corpus ingest_papers(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      PaperRecord record = parse_paper(line, corpus.dropped_keywords);
      if (record.keywords.empty()) {
        ++corpus.dropped_empty;
        continue;
      }
      corpus.records.push_back(std::move(record));
    } catch (const Error& e) {
      corpus.issues.push_back({line_number, e.what()});
    }
  }
  for (const auto& issue : corpus.issues) {
    spdlog::warn("papers line {}: {}", issue.line, issue.message);
  }
  return corpus;
}

Corpus ingest_papers_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return ingest_papers(in);
}

void TermCounts::add(const PaperRecord& record) {
  for (const auto& keyword : record.keywords) {
    auto it = counts_.find(keyword);
    if (it == counts_.end()) {
      counts_.emplace(keyword, 1);
    } else {
      ++it->second;
    }
  }
}

void TermCounts::merge(const TermCounts& other) {
  for (const auto& [term, count] : other.counts_) counts_[term] += count;
}

TermCounts count_terms(std::span<const PaperRecord> records) {
  TermCounts counts;
  for (const auto& record : records) counts.add(record);
  return counts;
}

Vocabulary::Vocabulary(std::map<std::string, std::uint64_t, std::less<>> entries,
                       std::uint64_t min_count)
    : entries_(std::move(entries)), min_count_(min_count) {
  if (min_count_ < 1) {
    throw Error(ErrorKind::kConfig, "min_count must be >= 1");
  }
  for (const auto& [term, count] : entries_) {
    if (count < min_count_) {
      throw Error(ErrorKind::kStructure,
                  "vocabulary term '" + term + "' below min_count");
    }
    auto normalized = try_normalize_keyword(term);
    if (!normalized || *normalized != term) {
      throw Error(ErrorKind::kStructure,
                  "vocabulary term '" + term + "' is not normalized");
    }
  }
}

Vocabulary Vocabulary::from_counts(const TermCounts& counts,
                                   std::uint64_t min_count) {
  std::map<std::string, std::uint64_t, std::less<>> kept;
  for (const auto& [term, count] : counts.counts()) {
    if (count >= min_count) kept.emplace_hint(kept.end(), term, count);
  }
  return Vocabulary(std::move(kept), min_count);
}

bool Vocabulary::contains(std::string_view term) const {
  return entries_.find(term) != entries_.end();
}

std::uint64_t Vocabulary::count(std::string_view term) const {
  auto it = entries_.find(term);
  return it == entries_.end() ? 0 : it->second;
}

std::vector<std::string> Vocabulary::terms() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [term, count] : entries_) out.push_back(term);
  return out;
}

std::vector<std::pair<std::string, std::uint64_t>> Vocabulary::by_frequency()
    const {
  std::vector<std::pair<std::string, std::uint64_t>> rows(entries_.begin(),
                                                          entries_.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  return rows;
}

namespace {

void check_build_args(const Corpus& corpus, long long min_count) {
  if (min_count < 1) {
    throw Error(ErrorKind::kConfig,
                "min_count must be >= 1, got " + std::to_string(min_count));
  }
  if (corpus.records.empty()) {
    throw Error(ErrorKind::kInput, "cannot build a vocabulary from an empty corpus");
  }
}

Vocabulary finish(const TermCounts& counts, long long min_count) {
  Vocabulary vocabulary =
      Vocabulary::from_counts(counts, static_cast<std::uint64_t>(min_count));
  if (vocabulary.empty()) {
    spdlog::warn("vocabulary is empty: no term reaches min_count {}", min_count);
  }
  return vocabulary;
}

}  // namespace

Vocabulary build_vocabulary(const Corpus& corpus, long long min_count) {
  check_build_args(corpus, min_count);
  return finish(count_terms(corpus.records), min_count);
}

Vocabulary build_vocabulary_parallel(const Corpus& corpus, long long min_count,
                                     std::size_t partitions) {
  check_build_args(corpus, min_count);
  partitions = std::clamp<std::size_t>(partitions, 1, corpus.records.size());
  std::vector<TermCounts> partial(partitions);
  std::vector<std::jthread> workers;
  const std::span<const PaperRecord> all(corpus.records);
  const std::size_t chunk = (all.size() + partitions - 1) / partitions;
  for (std::size_t p = 0; p < partitions; ++p) {
    const std::size_t begin = std::min(all.size(), p * chunk);
    const std::size_t end = std::min(all.size(), begin + chunk);
    workers.emplace_back([&partial, p, slice = all.subspan(begin, end - begin)] {
      partial[p] = count_terms(slice);
    });
  }
  workers.clear();
  TermCounts merged;
  for (const auto& counts : partial) merged.merge(counts);
  return finish(merged, min_count);
}

void write_vocabulary_tsv(std::ostream& out, const Vocabulary& vocabulary) {
  for (const auto& [term, count] : vocabulary.by_frequency()) {
    out << term << '\t' << count << '\n';
  }
}

Vocabulary read_vocabulary_tsv(std::istream& in) {
  std::map<std::string, std::uint64_t, std::less<>> entries;
  std::uint64_t min_count = 0;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    auto fields = io::split(line, '\t');
    if (fields.size() != 2) {
      throw Error(ErrorKind::kParse, "vocab line " + std::to_string(line_number) +
                                         ": expected term<TAB>count");
    }
    const long long count = io::parse_int(fields[1]);
    if (count < 1) {
      throw Error(ErrorKind::kParse, "vocab line " + std::to_string(line_number) +
                                         ": count must be positive");
    }
    if (!entries.emplace(std::string(fields[0]), count).second) {
      throw Error(ErrorKind::kParse, "vocab line " + std::to_string(line_number) +
                                         ": duplicate term");
    }
    const auto c = static_cast<std::uint64_t>(count);
    min_count = min_count == 0 ? c : std::min(min_count, c);
  }
  return Vocabulary(std::move(entries), std::max<std::uint64_t>(min_count, 1));
}

Vocabulary read_vocabulary_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_vocabulary_tsv(in);
}

}  // namespace sommelier
