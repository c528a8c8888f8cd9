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
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "sommelier/embedding.hpp"
#include "sommelier/kb_builder.hpp"

namespace sommelier {

// Unigrams then adjacent-token bigrams of the title, then the same for the
// description; normalized, deduplicated in first-occurrence order.
std::vector<std::string> extract_terms(std::string_view title, std::string_view description);

enum class MatchSource { kProblems, kVocabulary };

struct MatchedKeywords {
  std::vector<std::string> terms;
  MatchSource source = MatchSource::kProblems;

  bool fallback_used() const { return source == MatchSource::kVocabulary; }
};

struct ScoredAlgorithm {
  std::string algorithm;
  double score = 0.0;

  bool operator==(const ScoredAlgorithm&) const = default;
};

struct RecommendationList {
  std::string title;
  std::string description;
  MatchedKeywords matched;
  std::vector<ScoredAlgorithm> entries;  // descending score, ties by name
};

// Scores over an embedding and a knowledge base that outlive it. Immutable
// after construction and safe to share between threads.
class Recommender {
 public:
  // Throws Error(kConfig) when no algorithm term carries a vocabulary match.
  Recommender(const VectorStore& vectors, const KnowledgeBase& kb);

  // Problem-term forms first; the whole vocabulary only when none of those hit.
  // Throws Error(kNoMatch) when both stages come up empty.
  MatchedKeywords match_keywords(const std::vector<std::string>& candidates) const;

  std::vector<ScoredAlgorithm> score_algorithms(const MatchedKeywords& matched) const;

  RecommendationList recommend(std::string_view title, std::string_view description,
                               std::size_t top_k = 10) const;

  std::size_t algorithm_count() const { return algorithms_.size(); }
  const VectorStore& vectors() const { return *vectors_; }

 private:
  struct MappedAlgorithm {
    std::string term;
    std::size_t row;
  };

  const VectorStore* vectors_;
  std::unordered_set<std::string> problem_forms_;
  std::vector<MappedAlgorithm> algorithms_;
};

}  // namespace sommelier
