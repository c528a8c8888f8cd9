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

#include "sommelier/kb_builder.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <unordered_set>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "sommelier/error.hpp"
#include "sommelier/io.hpp"
#include "sommelier/text.hpp"

namespace sommelier {
namespace {

using nlohmann::json;

std::vector<std::string> json_strings(const json& doc, const char* field) {
  std::vector<std::string> out;
  auto it = doc.find(field);
  if (it == doc.end()) return out;
  if (!it->is_array()) {
    throw Error(ErrorKind::kParse, std::string("seeds: \"") + field + "\" must be an array");
  }
  for (const auto& item : *it) {
    if (!item.is_string()) {
      throw Error(ErrorKind::kParse, std::string("seeds: \"") + field + "\" must hold strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::set<std::string> normalized_set(std::span<const std::string> raw) {
  std::set<std::string> out;
  for (const auto& item : raw) {
    if (auto n = try_normalize_keyword(item)) out.insert(*n);
  }
  return out;
}

void resolve_titles(const TermGraph& graph, std::span<const std::string> titles,
                    const char* what, std::set<NodeId>& out) {
  for (const auto& raw : titles) {
    const std::string title = normalize_keyword(raw);
    auto id = graph.find(title);
    if (!id) {
      throw Error(ErrorKind::kConfig,
                  std::string(what) + " seed '" + title + "' is not in the page graph");
    }
    if (graph.page(*id).stub) {
      spdlog::warn("{} seed '{}' is a stub page without text", what, title);
    }
    out.insert(*id);
  }
}

std::vector<std::vector<std::string>> content_phrases(std::span<const std::string> terms) {
  std::vector<std::vector<std::string>> phrases;
  for (const auto& term : terms) {
    auto tokens = tokenize_words(term);
    if (!tokens.empty()) phrases.push_back(std::move(tokens));
  }
  return phrases;
}

bool contains_phrase(std::span<const std::string> tokens,
                     std::span<const std::string> phrase) {
  if (phrase.size() > tokens.size()) return false;
  for (std::size_t start = 0; start + phrase.size() <= tokens.size(); ++start) {
    if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + start)) return true;
  }
  return false;
}

TermLabel parse_target(std::string_view field, std::size_t line) {
  if (field == "algorithm") return TermLabel::kAlgorithm;
  if (field == "problem") return TermLabel::kProblem;
  throw Error(ErrorKind::kParse, "review line " + std::to_string(line) +
                                     ": class must be 'algorithm' or 'problem'");
}

void erase_term(std::vector<ScoredTerm>& terms, std::string_view term) {
  std::erase_if(terms, [&](const ScoredTerm& t) { return t.term == term; });
}

}  // namespace

SeedConfig parse_seed_config(std::string_view json_text) {
  json doc = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::kParse, "seeds: not a JSON object");
  }
  SeedConfig config;
  if (doc.contains("algorithm_categories")) {
    config.algorithm_categories = json_strings(doc, "algorithm_categories");
  }
  config.algorithm_extra_titles = json_strings(doc, "algorithm_extra_titles");
  config.problem_titles = json_strings(doc, "problem_titles");
  return config;
}

SeedConfig read_seed_config_file(const std::filesystem::path& path) {
  return parse_seed_config(io::read_file(path));
}

SeedSets generate_seeds(const TermGraph& graph, const SeedConfig& config) {
  const std::set<std::string> categories = normalized_set(config.algorithm_categories);
  std::set<NodeId> algorithms, problems;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    for (const auto& c : graph.page(v).categories) {
      if (categories.count(c)) {
        algorithms.insert(v);
        break;
      }
    }
  }
  resolve_titles(graph, config.algorithm_extra_titles, "algorithm", algorithms);
  resolve_titles(graph, config.problem_titles, "problem", problems);
  for (NodeId v : algorithms) {
    if (problems.count(v)) {
      throw Error(ErrorKind::kConfig, "page '" + graph.page(v).title +
                                          "' is seeded as both algorithm and problem");
    }
  }
  if (algorithms.empty()) throw Error(ErrorKind::kConfig, "no algorithm seeds found");
  if (problems.empty()) throw Error(ErrorKind::kConfig, "no problem seeds found");
  return {{algorithms.begin(), algorithms.end()}, {problems.begin(), problems.end()}};
}

std::vector<std::string> build_bow_vocabulary(const TermGraph& graph, const SeedSets& seeds,
                                              std::size_t cap) {
  std::map<std::string, std::size_t> document_frequency;
  auto count_page = [&](NodeId v) {
    const auto tokens = tokenize_words(graph.page(v).text);
    const std::set<std::string> distinct(tokens.begin(), tokens.end());
    for (const auto& t : distinct) ++document_frequency[t];
  };
  for (NodeId v : seeds.algorithms) count_page(v);
  for (NodeId v : seeds.problems) count_page(v);

  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [token, df] : document_frequency) {
    if (df >= 2) ranked.emplace_back(token, df);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > cap) ranked.resize(cap);
  std::vector<std::string> out;
  out.reserve(ranked.size());
  for (auto& [token, df] : ranked) out.push_back(std::move(token));
  return out;
}

TermFeaturizer::TermFeaturizer(const TermGraph& graph, const SeedSets& seeds,
                               std::vector<std::string> bow_vocabulary)
    : graph_(&graph),
      network_(graph, seeds.algorithms, seeds.problems),
      bow_(std::move(bow_vocabulary)) {
  for (std::size_t k = 0; k < bow_.size(); ++k) bow_index_.emplace(bow_[k], k);
}

std::vector<double> TermFeaturizer::features(NodeId node) const {
  std::vector<double> out(width(), 0.0);
  const auto network = network_.features(node).to_array();
  std::copy(network.begin(), network.end(), out.begin());
  for (const auto& token : tokenize_words(graph_->page(node).text)) {
    auto it = bow_index_.find(token);
    if (it != bow_index_.end()) out[kNetworkFeatureCount + it->second] += 1.0;
  }
  return out;
}

std::vector<LabeledExample> build_training_set(const TermGraph& graph, const SeedSets& seeds,
                                               const TermFeaturizer& featurizer,
                                               std::size_t negative_ratio,
                                               std::uint64_t seed) {
  std::vector<LabeledExample> examples;
  auto add = [&](NodeId v, TermLabel label) {
    examples.push_back({graph.page(v).title, v, featurizer.features(v), label});
  };
  for (NodeId v : seeds.algorithms) add(v, TermLabel::kAlgorithm);
  for (NodeId v : seeds.problems) add(v, TermLabel::kProblem);

  std::unordered_set<NodeId> is_seed(seeds.algorithms.begin(), seeds.algorithms.end());
  is_seed.insert(seeds.problems.begin(), seeds.problems.end());
  std::vector<NodeId> pool;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (!is_seed.count(v) && !graph.page(v).stub) pool.push_back(v);
  }
  const std::size_t needed = negative_ratio * (seeds.algorithms.size() + seeds.problems.size());
  if (pool.size() < needed) {
    throw Error(ErrorKind::kInput, "negative sampling needs " + std::to_string(needed) +
                                       " non-seed pages but only " +
                                       std::to_string(pool.size()) + " exist (short by " +
                                       std::to_string(needed - pool.size()) + ")");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(needed);
  std::sort(pool.begin(), pool.end());
  for (NodeId v : pool) add(v, TermLabel::kOther);
  return examples;
}

GradientBoostedTrees train_classifier(std::span<const LabeledExample> examples,
                                      const BoostingOptions& options) {
  std::vector<std::vector<double>> x;
  std::vector<TermLabel> y;
  x.reserve(examples.size());
  y.reserve(examples.size());
  for (const auto& e : examples) {
    x.push_back(e.features);
    y.push_back(e.label);
  }
  return GradientBoostedTrees::fit(x, y, options);
}

CandidateSet generate_candidates(const TermGraph& graph, const SeedSets& seeds,
                                 const CandidateRules& rules) {
  std::unordered_set<NodeId> is_seed(seeds.algorithms.begin(), seeds.algorithms.end());
  is_seed.insert(seeds.problems.begin(), seeds.problems.end());
  auto eligible = [&](NodeId v) { return !is_seed.count(v) && !graph.page(v).stub; };

  CandidateSet out;
  std::vector<std::string> patterns;
  for (const auto& p : rules.title_patterns) {
    if (auto n = try_normalize_keyword(p)) patterns.push_back(*n);
  }
  const auto phrases = content_phrases(rules.content_terms);

  // Multi-source BFS from every seed, bounded by max_hops.
  std::vector<std::uint32_t> hops(graph.node_count(), kUnreachable);
  std::deque<NodeId> queue;
  for (const auto* list : {&seeds.algorithms, &seeds.problems}) {
    for (NodeId s : *list) {
      if (hops[s] != 0) {
        hops[s] = 0;
        queue.push_back(s);
      }
    }
  }
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    if (hops[v] >= rules.max_hops) continue;
    for (NodeId w : graph.links().out_neighbors(v)) {
      if (hops[w] == kUnreachable) {
        hops[w] = hops[v] + 1;
        queue.push_back(w);
      }
    }
  }

  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (!eligible(v)) continue;
    const Page& page = graph.page(v);
    const bool title_hit = std::any_of(patterns.begin(), patterns.end(), [&](const auto& p) {
      return page.title.find(p) != std::string::npos;
    });
    const bool near_seed = hops[v] != kUnreachable;
    bool content_hit = false;
    if (!phrases.empty() && !page.text.empty()) {
      const auto tokens = tokenize_words(page.text);
      content_hit = std::any_of(phrases.begin(), phrases.end(),
                                [&](const auto& phrase) { return contains_phrase(tokens, phrase); });
    }
    if (title_hit) out.by_title.push_back(v);
    if (near_seed) out.by_proximity.push_back(v);
    if (content_hit) out.by_content.push_back(v);
    if (title_hit || near_seed || content_hit) out.all.push_back(v);
  }
  return out;
}

void sort_scored(std::vector<ScoredTerm>& terms) {
  std::sort(terms.begin(), terms.end(), [](const ScoredTerm& a, const ScoredTerm& b) {
    return a.score != b.score ? a.score > b.score : a.term < b.term;
  });
}

Selection rank_and_select(const TermClassifier& classifier, const TermGraph& graph,
                          const TermFeaturizer& featurizer, std::span<const NodeId> candidates,
                          std::size_t k) {
  Selection out;
  for (NodeId v : candidates) {
    const auto p = classifier.predict_proba(featurizer.features(v));
    const double algorithm = p[static_cast<std::size_t>(TermLabel::kAlgorithm)];
    const double problem = p[static_cast<std::size_t>(TermLabel::kProblem)];
    if (algorithm >= problem) {
      out.algorithms.push_back({graph.page(v).title, algorithm});
    } else {
      out.problems.push_back({graph.page(v).title, problem});
    }
  }
  sort_scored(out.algorithms);
  sort_scored(out.problems);
  if (out.algorithms.size() > k) out.algorithms.resize(k);
  if (out.problems.size() > k) out.problems.resize(k);
  return out;
}

std::vector<ReviewOverride> read_review_overrides(std::istream& in) {
  std::vector<ReviewOverride> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line.front() == '#') continue;
    const auto fields = io::split(line, '\t');
    if (fields.size() != 3) {
      throw Error(ErrorKind::kParse, "review line " + std::to_string(line_number) +
                                         ": expected term<TAB>add|remove<TAB>class");
    }
    ReviewOverride row;
    row.term = normalize_keyword(fields[0]);
    if (fields[1] == "add") {
      row.action = ReviewAction::kAdd;
    } else if (fields[1] == "remove") {
      row.action = ReviewAction::kRemove;
    } else {
      throw Error(ErrorKind::kParse, "review line " + std::to_string(line_number) +
                                         ": action must be 'add' or 'remove'");
    }
    row.target = parse_target(fields[2], line_number);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<ReviewOverride> read_review_overrides_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_review_overrides(in);
}

Selection apply_review(Selection selection, std::span<const ReviewOverride> overrides) {
  std::map<std::string, TermLabel> target_of;
  for (const auto& o : overrides) {
    auto [it, inserted] = target_of.emplace(o.term, o.target);
    if (!inserted && it->second != o.target) {
      throw Error(ErrorKind::kConfig,
                  "review overrides reference both classes for '" + o.term + "'");
    }
  }
  for (const auto& o : overrides) {
    auto& own = o.target == TermLabel::kAlgorithm ? selection.algorithms : selection.problems;
    auto& other = o.target == TermLabel::kAlgorithm ? selection.problems : selection.algorithms;
    erase_term(own, o.term);
    if (o.action == ReviewAction::kAdd) {
      erase_term(other, o.term);
      own.push_back({o.term, 1.0});
    }
  }
  sort_scored(selection.algorithms);
  sort_scored(selection.problems);
  return selection;
}

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diagonal = up;
    }
  }
  return row[b.size()];
}

double normalized_levenshtein(std::string_view a, std::string_view b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorKind::kDomain, "normalized edit distance of an empty string");
  }
  return static_cast<double>(levenshtein_distance(a, b)) /
         static_cast<double>(std::max(a.size(), b.size()));
}

std::optional<std::string> match_to_vocabulary(std::string_view term,
                                               std::span<const std::string> vocabulary,
                                               double threshold) {
  if (term.empty()) return std::nullopt;
  auto exact = std::lower_bound(vocabulary.begin(), vocabulary.end(), term);
  if (exact != vocabulary.end() && *exact == term) return *exact;

  const std::string* best = nullptr;
  double best_distance = threshold;
  for (const auto& candidate : vocabulary) {
    if (candidate.empty()) continue;
    const double longest = static_cast<double>(std::max(candidate.size(), term.size()));
    const double lower_bound =
        static_cast<double>(candidate.size() > term.size() ? candidate.size() - term.size()
                                                           : term.size() - candidate.size()) /
        longest;
    if (lower_bound > best_distance) continue;
    const double d = normalized_levenshtein(term, candidate);
    if (d < best_distance || (d == best_distance && best == nullptr)) {
      best_distance = d;
      best = &candidate;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

void KnowledgeBase::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& t : algorithms) seen.insert(t.term);
  for (const auto& t : problems) {
    if (seen.count(t.term)) {
      throw Error(ErrorKind::kStructure,
                  "'" + t.term + "' is both an algorithm and a problem term");
    }
  }
}

KnowledgeBase map_to_vocabulary(const Selection& selection,
                                std::span<const std::string> vocabulary, double threshold) {
  KnowledgeBase kb;
  auto convert = [&](const std::vector<ScoredTerm>& in, std::vector<KbTerm>& out) {
    for (const auto& t : in) {
      out.push_back({t.term, t.score, match_to_vocabulary(t.term, vocabulary, threshold)});
    }
  };
  convert(selection.algorithms, kb.algorithms);
  convert(selection.problems, kb.problems);
  kb.validate();
  return kb;
}

void write_kb_tsv(std::ostream& out, std::span<const KbTerm> terms) {
  std::vector<const KbTerm*> rows;
  for (const auto& t : terms) rows.push_back(&t);
  std::stable_sort(rows.begin(), rows.end(), [](const KbTerm* a, const KbTerm* b) {
    return a->score != b->score ? a->score > b->score : a->term < b->term;
  });
  for (const KbTerm* t : rows) {
    out << t->term << '\t' << io::format_double(t->score) << '\t'
        << (t->match ? *t->match : "-") << '\n';
  }
}

std::vector<KbTerm> read_kb_tsv(std::istream& in) {
  std::vector<KbTerm> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto fields = io::split(line, '\t');
    if (fields.size() != 3 || fields[0].empty()) {
      throw Error(ErrorKind::kParse, "kb line " + std::to_string(line_number) +
                                         ": expected term<TAB>score<TAB>match");
    }
    KbTerm t;
    t.term = std::string(fields[0]);
    t.score = io::parse_double(fields[1]);
    if (fields[2] != "-") t.match = std::string(fields[2]);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<KbTerm> read_kb_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_kb_tsv(in);
}

KbBuildResult build_knowledge_base(const TermGraph& graph, const SeedConfig& seed_config,
                                   std::span<const ReviewOverride> overrides,
                                   std::span<const std::string> vocabulary,
                                   const KbBuildOptions& options) {
  if (vocabulary.empty()) {
    throw Error(ErrorKind::kConfig, "embedding vocabulary is empty");
  }
  const SeedSets seeds = generate_seeds(graph, seed_config);
  TermFeaturizer featurizer(graph, seeds, build_bow_vocabulary(graph, seeds, options.bow_cap));
  const auto examples =
      build_training_set(graph, seeds, featurizer, options.negative_ratio, options.seed);
  const GradientBoostedTrees classifier = train_classifier(examples, options.boosting);
  const CandidateSet candidates = generate_candidates(graph, seeds, options.rules);
  Selection selection =
      rank_and_select(classifier, graph, featurizer, candidates.all, options.select_k);
  spdlog::info("knowledge base: {} training examples, {} candidates, {} + {} selected",
               examples.size(), candidates.all.size(), selection.algorithms.size(),
               selection.problems.size());

  for (NodeId v : seeds.algorithms) selection.algorithms.push_back({graph.page(v).title, 1.0});
  for (NodeId v : seeds.problems) selection.problems.push_back({graph.page(v).title, 1.0});
  sort_scored(selection.algorithms);
  sort_scored(selection.problems);
  selection = apply_review(std::move(selection), overrides);

  KbBuildResult result;
  result.knowledge_base = map_to_vocabulary(selection, vocabulary, options.lev_threshold);
  result.training_examples = examples.size();
  result.candidates = candidates.all.size();
  return result;
}

}  // namespace sommelier
