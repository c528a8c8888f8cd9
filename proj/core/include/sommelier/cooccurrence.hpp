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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sommelier/corpus.hpp"

namespace sommelier {

// Per-paper recency multiplier: 1 before 2000, year - 2000 + 1 afterwards.
int recency_weight(int year);

// Term ids index the lexicographically sorted vocabulary, so i < j on ids is
// the same as term_i < term_j on strings.
struct CooccurrenceEntry {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double weight = 0.0;

  bool operator==(const CooccurrenceEntry&) const = default;
};

// Sparse symmetric matrix over unordered term pairs. Only the upper triangle
// (i < j) is stored; both orientations answer through weight().
class CooccurrenceMatrix {
 public:
  CooccurrenceMatrix() = default;
  // `terms` must be strictly ascending; entries are validated and sorted.
  CooccurrenceMatrix(std::vector<std::string> terms,
                     std::vector<CooccurrenceEntry> entries);

  const std::vector<std::string>& terms() const { return terms_; }
  std::span<const CooccurrenceEntry> entries() const { return entries_; }
  std::size_t vocabulary_size() const { return terms_.size(); }
  std::size_t pair_count() const { return entries_.size(); }

  std::optional<std::uint32_t> index_of(std::string_view term) const;
  // 0 when the pair never co-occurred or either term is unknown.
  double weight(std::string_view a, std::string_view b) const;
  double weight(std::uint32_t a, std::uint32_t b) const;

  bool operator==(const CooccurrenceMatrix&) const = default;

 private:
  std::vector<std::string> terms_;
  std::vector<CooccurrenceEntry> entries_;
};

// Every unordered pair of in-vocabulary keywords of a paper receives that
// paper's recency weight. Throws Error(kConfig) on an empty vocabulary.
CooccurrenceMatrix build_matrix(const Corpus& corpus, const Vocabulary& vocabulary);

// Papers split into `partitions` contiguous slices accumulated on separate
// threads; partial maps are merged in ascending partition index.
CooccurrenceMatrix build_matrix_parallel(const Corpus& corpus,
                                         const Vocabulary& vocabulary,
                                         std::size_t partitions);

// cooccur.tsv: term_i<TAB>term_j<TAB>weight, term_i < term_j, sorted.
void write_cooccurrence_tsv(std::ostream& out, const CooccurrenceMatrix& matrix);
CooccurrenceMatrix read_cooccurrence_tsv(std::istream& in,
                                         const Vocabulary& vocabulary);
CooccurrenceMatrix read_cooccurrence_file(const std::filesystem::path& path,
                                          const Vocabulary& vocabulary);

}  // namespace sommelier
