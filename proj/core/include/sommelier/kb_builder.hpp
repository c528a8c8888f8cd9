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
#include <unordered_map>
#include <vector>

#include "sommelier/gbdt.hpp"
#include "sommelier/term_graph.hpp"

namespace sommelier {

// seeds.json. Categories and titles are compared after keyword normalization.
struct SeedConfig {
  std::vector<std::string> algorithm_categories{
      "classification algorithms", "cluster analysis algorithms", "regression models"};
  std::vector<std::string> algorithm_extra_titles;
  std::vector<std::string> problem_titles;
};

SeedConfig parse_seed_config(std::string_view json_text);
SeedConfig read_seed_config_file(const std::filesystem::path& path);

struct SeedSets {
  std::vector<NodeId> algorithms;  // ascending node ids
  std::vector<NodeId> problems;
};

// Algorithm seeds: pages in any configured category plus the extra titles.
// Problem seeds: the configured problem titles. Throws Error(kConfig) for a
// title missing from the graph, a title in both classes, or an empty class.
SeedSets generate_seeds(const TermGraph& graph, const SeedConfig& config);

// Lowercase word tokens that occur in at least two seed pages, by descending
// document frequency (ties ascending), truncated to `cap`.
std::vector<std::string> build_bow_vocabulary(const TermGraph& graph, const SeedSets& seeds,
                                              std::size_t cap = 5000);

// Network features (13) followed by bag-of-words token counts of page text.
class TermFeaturizer {
 public:
  TermFeaturizer(const TermGraph& graph, const SeedSets& seeds,
                 std::vector<std::string> bow_vocabulary);

  std::size_t width() const { return kNetworkFeatureCount + bow_.size(); }
  std::vector<double> features(NodeId node) const;
  const std::vector<std::string>& bow_vocabulary() const { return bow_; }

 private:
  const TermGraph* graph_;
  NetworkFeatureTable network_;
  std::vector<std::string> bow_;
  std::unordered_map<std::string, std::size_t> bow_index_;
};

struct LabeledExample {
  std::string term;
  NodeId node = 0;
  std::vector<double> features;
  TermLabel label = TermLabel::kOther;
};

// Every seed with its label plus negative_ratio x |seeds| non-seed, non-stub
// pages drawn without replacement and labeled "other". Throws Error(kInput)
// reporting the shortfall when there are not enough such pages.
std::vector<LabeledExample> build_training_set(const TermGraph& graph, const SeedSets& seeds,
                                               const TermFeaturizer& featurizer,
                                               std::size_t negative_ratio, std::uint64_t seed);

GradientBoostedTrees train_classifier(std::span<const LabeledExample> examples,
                                      const BoostingOptions& options = {});

struct CandidateRules {
  std::vector<std::string> title_patterns{"recognition", "analysis", "detection", "system"};
  std::size_t max_hops = 3;
  std::vector<std::string> content_terms{
      "machine learning", "data mining", "regression", "supervised learning",
      "unsupervised learning", "decision trees", "boosting", "random forest",
      "neural networks", "ANN", "deep learning", "recurrent neural network", "RNN",
      "convolutional neural network", "CNN", "relevance vector machine", "RVM",
      "support vector machine", "SVM", "k-means", "DBSCAN", "mean-shift",
      "bayesian networks", "feature engineering"};
};

// Each rule's matches kept separately; seeds and stub nodes never qualify.
struct CandidateSet {
  std::vector<NodeId> by_title;      // title contains a pattern
  std::vector<NodeId> by_proximity;  // within max_hops out-links of a seed
  std::vector<NodeId> by_content;    // text contains a content term (whole words)
  std::vector<NodeId> all;           // ascending union
};

CandidateSet generate_candidates(const TermGraph& graph, const SeedSets& seeds,
                                 const CandidateRules& rules = {});

struct ScoredTerm {
  std::string term;
  double score = 0.0;

  bool operator==(const ScoredTerm&) const = default;
};

struct Selection {
  std::vector<ScoredTerm> algorithms;
  std::vector<ScoredTerm> problems;
};

// Orders by descending score, ties by ascending term.
void sort_scored(std::vector<ScoredTerm>& terms);

// Each candidate joins only the class (algorithm or problem) it is more
// likely to belong to, scored by that probability; the top k of each class
// are kept.
Selection rank_and_select(const TermClassifier& classifier, const TermGraph& graph,
                          const TermFeaturizer& featurizer, std::span<const NodeId> candidates,
                          std::size_t k = 2000);

enum class ReviewAction { kAdd, kRemove };

struct ReviewOverride {
  std::string term;
  ReviewAction action = ReviewAction::kRemove;
  TermLabel target = TermLabel::kAlgorithm;  // algorithm or problem
};

// review_overrides.tsv: term<TAB>add|remove<TAB>algorithm|problem.
std::vector<ReviewOverride> read_review_overrides(std::istream& in);
std::vector<ReviewOverride> read_review_overrides_file(const std::filesystem::path& path);

// "remove" drops the term from its class; "add" inserts it with score 1.0
// (and takes it out of the other class). Throws Error(kConfig) when one term
// is overridden towards both classes.
Selection apply_review(Selection selection, std::span<const ReviewOverride> overrides);

std::size_t levenshtein_distance(std::string_view a, std::string_view b);

// Edit distance divided by the longer length. Throws Error(kDomain) on an
// empty argument.
double normalized_levenshtein(std::string_view a, std::string_view b);

// Closest vocabulary term (ties: lexicographically first) when its
// normalized distance is <= threshold. `vocabulary` must be sorted.
std::optional<std::string> match_to_vocabulary(std::string_view term,
                                               std::span<const std::string> vocabulary,
                                               double threshold = 0.35);

struct KbTerm {
  std::string term;
  double score = 0.0;
  std::optional<std::string> match;  // embedding vocabulary term

  bool operator==(const KbTerm&) const = default;
};

struct KnowledgeBase {
  std::vector<KbTerm> algorithms;
  std::vector<KbTerm> problems;

  // Throws Error(kStructure) when a term is in both lists.
  void validate() const;
  bool operator==(const KnowledgeBase&) const = default;
};

KnowledgeBase map_to_vocabulary(const Selection& selection,
                                std::span<const std::string> vocabulary, double threshold);

// kb_*.tsv: term<TAB>score<TAB>matched term or "-", by descending score.
void write_kb_tsv(std::ostream& out, std::span<const KbTerm> terms);
std::vector<KbTerm> read_kb_tsv(std::istream& in);
std::vector<KbTerm> read_kb_file(const std::filesystem::path& path);

struct KbBuildOptions {
  std::size_t bow_cap = 5000;
  std::size_t negative_ratio = 5;
  std::uint64_t seed = 42;
  BoostingOptions boosting;
  CandidateRules rules;
  std::size_t select_k = 2000;
  double lev_threshold = 0.35;
};

struct KbBuildResult {
  KnowledgeBase knowledge_base;
  std::size_t training_examples = 0;
  std::size_t candidates = 0;
};

// Seeds -> features -> classifier -> candidates -> selection (seed terms
// included at score 1.0) -> review -> vocabulary matching.
KbBuildResult build_knowledge_base(const TermGraph& graph, const SeedConfig& seeds,
                                   std::span<const ReviewOverride> overrides,
                                   std::span<const std::string> vocabulary,
                                   const KbBuildOptions& options = {});

}  // namespace sommelier
