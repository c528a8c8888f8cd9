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

#include "sommelier/cooccurrence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "sommelier/error.hpp"
#include "sommelier/io.hpp"

namespace sommelier {
namespace {

using PairKey = std::uint64_t;
using PartialMatrix = std::unordered_map<PairKey, double>;

PairKey make_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<PairKey>(a) << 32) | b;
}

class TermIndex {
 public:
  explicit TermIndex(const std::vector<std::string>& terms) {
    index_.reserve(terms.size());
    for (std::uint32_t id = 0; id < terms.size(); ++id) index_.emplace(terms[id], id);
  }
  std::optional<std::uint32_t> find(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
};

void accumulate(std::span<const PaperRecord> papers, const TermIndex& index,
                PartialMatrix& out) {
  std::vector<std::uint32_t> ids;
  for (const auto& paper : papers) {
    ids.clear();
    for (const auto& keyword : paper.keywords) {
      if (auto id = index.find(keyword)) ids.push_back(*id);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    const double y = recency_weight(paper.year);
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        out[make_key(ids[a], ids[b])] += y;
      }
    }
  }
}

std::vector<CooccurrenceEntry> to_entries(const PartialMatrix& partial) {
  std::vector<CooccurrenceEntry> entries;
  entries.reserve(partial.size());
  for (const auto& [key, weight] : partial) {
    entries.push_back({static_cast<std::uint32_t>(key >> 32),
                       static_cast<std::uint32_t>(key & 0xffffffffu), weight});
  }
  return entries;
}

void require_vocabulary(const Vocabulary& vocabulary) {
  if (vocabulary.empty()) {
    throw Error(ErrorKind::kConfig,
                "cannot build a co-occurrence matrix over an empty vocabulary");
  }
}

}  // namespace

int recency_weight(int year) { return year < 2000 ? 1 : year - 2000 + 1; }

CooccurrenceMatrix::CooccurrenceMatrix(std::vector<std::string> terms,
                                       std::vector<CooccurrenceEntry> entries)
    : terms_(std::move(terms)), entries_(std::move(entries)) {
  for (std::size_t k = 1; k < terms_.size(); ++k) {
    if (!(terms_[k - 1] < terms_[k])) {
      throw Error(ErrorKind::kStructure, "matrix terms must be strictly ascending");
    }
  }
  const auto n = static_cast<std::uint32_t>(terms_.size());
  for (auto& e : entries_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i == e.j) {
      throw Error(ErrorKind::kStructure, "self pair for term '" + terms_.at(e.i) + "'");
    }
    if (e.j >= n) throw Error(ErrorKind::kStructure, "pair references unknown term id");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorKind::kStructure, "co-occurrence weights must be positive");
    }
  }
  std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < entries_.size(); ++k) {
    if (entries_[k - 1].i == entries_[k].i && entries_[k - 1].j == entries_[k].j) {
      throw Error(ErrorKind::kStructure, "duplicate pair " + terms_[entries_[k].i] +
                                             "/" + terms_[entries_[k].j]);
    }
  }
}

std::optional<std::uint32_t> CooccurrenceMatrix::index_of(std::string_view term) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
  if (it == terms_.end() || *it != term) return std::nullopt;
  return static_cast<std::uint32_t>(it - terms_.begin());
}

double CooccurrenceMatrix::weight(std::uint32_t a, std::uint32_t b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{a, b},
                             [](const CooccurrenceEntry& e, const auto& key) {
                               return e.i != key.first ? e.i < key.first
                                                       : e.j < key.second;
                             });
  if (it == entries_.end() || it->i != a || it->j != b) return 0.0;
  return it->weight;
}

double CooccurrenceMatrix::weight(std::string_view a, std::string_view b) const {
  auto ia = index_of(a);
  auto ib = index_of(b);
  if (!ia || !ib || *ia == *ib) return 0.0;
  return weight(*ia, *ib);
}

CooccurrenceMatrix build_matrix(const Corpus& corpus, const Vocabulary& vocabulary) {
  require_vocabulary(vocabulary);
  std::vector<std::string> terms = vocabulary.terms();
  TermIndex index(terms);
  PartialMatrix partial;
  accumulate(corpus.records, index, partial);
  return CooccurrenceMatrix(std::move(terms), to_entries(partial));
}

CooccurrenceMatrix build_matrix_parallel(const Corpus& corpus,
                                         const Vocabulary& vocabulary,
                                         std::size_t partitions) {
  require_vocabulary(vocabulary);
  std::vector<std::string> terms = vocabulary.terms();
  TermIndex index(terms);
  const std::span<const PaperRecord> all(corpus.records);
  partitions = std::clamp<std::size_t>(partitions, 1, std::max<std::size_t>(1, all.size()));
  std::vector<PartialMatrix> partial(partitions);
  {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (all.size() + partitions - 1) / partitions;
    for (std::size_t p = 0; p < partitions; ++p) {
      const std::size_t begin = std::min(all.size(), p * chunk);
      const std::size_t end = std::min(all.size(), begin + chunk);
      workers.emplace_back([&, p, begin, end] {
        accumulate(all.subspan(begin, end - begin), index, partial[p]);
      });
    }
  }
  PartialMatrix merged = std::move(partial.front());
  for (std::size_t p = 1; p < partitions; ++p) {
    for (const auto& [key, weight] : partial[p]) merged[key] += weight;
  }
  return CooccurrenceMatrix(std::move(terms), to_entries(merged));
}

void write_cooccurrence_tsv(std::ostream& out, const CooccurrenceMatrix& matrix) {
  const auto& terms = matrix.terms();
  for (const auto& e : matrix.entries()) {
    out << terms[e.i] << '\t' << terms[e.j] << '\t' << io::format_double(e.weight)
        << '\n';
  }
}

CooccurrenceMatrix read_cooccurrence_tsv(std::istream& in,
                                         const Vocabulary& vocabulary) {
  std::vector<std::string> terms = vocabulary.terms();
  TermIndex index(terms);
  std::vector<CooccurrenceEntry> entries;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    auto fields = io::split(line, '\t');
    const std::string where = "cooccur line " + std::to_string(line_number);
    if (fields.size() != 3) {
      throw Error(ErrorKind::kParse, where + ": expected term_i<TAB>term_j<TAB>weight");
    }
    auto a = index.find(std::string(fields[0]));
    auto b = index.find(std::string(fields[1]));
    if (!a || !b) {
      throw Error(ErrorKind::kParse, where + ": term not in vocabulary");
    }
    entries.push_back({*a, *b, io::parse_double(fields[2])});
  }
  return CooccurrenceMatrix(std::move(terms), std::move(entries));
}

CooccurrenceMatrix read_cooccurrence_file(const std::filesystem::path& path,
                                          const Vocabulary& vocabulary) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_cooccurrence_tsv(in, vocabulary);
}

}  // namespace sommelier
