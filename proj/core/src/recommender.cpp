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

#include "sommelier/recommender.hpp"

#include <algorithm>

#include "sommelier/error.hpp"
#include "sommelier/text.hpp"

namespace sommelier {
namespace {

void append_terms(std::string_view text, std::vector<std::string>& out,
                  std::unordered_set<std::string>& seen) {
  const auto tokens = tokenize_words(text);
  auto push = [&](std::string term) {
    if (seen.insert(term).second) out.push_back(std::move(term));
  };
  for (const auto& t : tokens) push(t);
  for (std::size_t k = 0; k + 1 < tokens.size(); ++k) push(tokens[k] + "_" + tokens[k + 1]);
}

}  // namespace

std::vector<std::string> extract_terms(std::string_view title, std::string_view description) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  append_terms(title, out, seen);
  append_terms(description, out, seen);
  if (out.empty()) {
    throw Error(ErrorKind::kInput, "title and description are both empty");
  }
  return out;
}

Recommender::Recommender(const VectorStore& vectors, const KnowledgeBase& kb)
    : vectors_(&vectors) {
  for (const auto& p : kb.problems) {
    if (p.match && vectors.contains(*p.match)) problem_forms_.insert(*p.match);
  }
  for (const auto& a : kb.algorithms) {
    if (!a.match) continue;
    auto row = vectors.index_of(*a.match);
    if (!row) continue;
    algorithms_.push_back({a.term, *row});
  }
  if (algorithms_.empty()) {
    throw Error(ErrorKind::kConfig, "no algorithm term is mapped to the embedding vocabulary");
  }
}

MatchedKeywords Recommender::match_keywords(const std::vector<std::string>& candidates) const {
  MatchedKeywords out;
  for (const auto& c : candidates) {
    if (problem_forms_.count(c)) out.terms.push_back(c);
  }
  if (!out.terms.empty()) return out;
  out.source = MatchSource::kVocabulary;
  for (const auto& c : candidates) {
    if (vectors_->contains(c)) out.terms.push_back(c);
  }
  if (out.terms.empty()) throw Error(ErrorKind::kNoMatch, "no keywords matched");
  return out;
}

std::vector<ScoredAlgorithm> Recommender::score_algorithms(const MatchedKeywords& matched) const {
  std::vector<std::span<const double>> keyword_vectors;
  for (const auto& term : matched.terms) {
    auto v = vectors_->find(term);
    if (!v) throw Error(ErrorKind::kLookup, "matched keyword '" + term + "' has no vector");
    keyword_vectors.push_back(*v);
  }
  std::vector<ScoredAlgorithm> out;
  out.reserve(algorithms_.size());
  for (const auto& a : algorithms_) {
    const auto w = vectors_->vector(a.row);
    double score = 0.0;
    for (const auto& v : keyword_vectors) score += cosine(w, v);
    out.push_back({a.term, score});
  }
  std::sort(out.begin(), out.end(), [](const ScoredAlgorithm& x, const ScoredAlgorithm& y) {
    return x.score != y.score ? x.score > y.score : x.algorithm < y.algorithm;
  });
  return out;
}

RecommendationList Recommender::recommend(std::string_view title, std::string_view description,
                                          std::size_t top_k) const {
  if (top_k < 1) throw Error(ErrorKind::kConfig, "top_k must be at least 1");
  RecommendationList out;
  out.title = std::string(title);
  out.description = std::string(description);
  out.matched = match_keywords(extract_terms(title, description));
  out.entries = score_algorithms(out.matched);
  if (out.entries.size() > top_k) out.entries.resize(top_k);
  return out;
}

}  // namespace sommelier
