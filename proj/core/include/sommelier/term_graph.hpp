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

#include <array>
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

#include "sommelier/digraph.hpp"

namespace sommelier {

// One pages.jsonl record before normalization.
struct PageRecord {
  std::string title;
  std::string text;
  std::vector<std::string> categories;
  std::vector<std::string> links;
};

struct Page {
  std::string title;                    // normalized
  std::string text;
  std::vector<std::string> categories;  // normalized
  bool stub = false;                    // materialized from a dangling link
};

// Page-link graph keyed by normalized title. Pages keep input order; stub
// nodes for dangling link targets follow in order of first reference.
class TermGraph {
 public:
  TermGraph() = default;

  // Throws Error(kStructure) naming the title when two pages normalize to the
  // same title.
  static TermGraph from_records(std::span<const PageRecord> records);

  std::size_t node_count() const { return pages_.size(); }
  const Page& page(NodeId id) const { return pages_[id]; }
  const std::vector<Page>& pages() const { return pages_; }
  const Digraph& links() const { return links_; }
  std::optional<NodeId> find(std::string_view title) const;
  // Throws Error(kLookup) for an unknown title.
  NodeId at(std::string_view title) const;

  // Stable content fingerprint (titles, texts, categories, stub flags, edges).
  std::uint64_t content_hash() const;

 private:
  std::vector<Page> pages_;
  std::unordered_map<std::string, NodeId> index_;
  Digraph links_;
};

TermGraph load_graph(std::istream& in);
TermGraph load_graph_file(const std::filesystem::path& path);

// Whole-graph centralities, computed once and shared read-only.
struct GraphCentralities {
  std::vector<double> pagerank;
  std::vector<double> betweenness;
  std::vector<double> closeness;
  std::vector<double> hub;
  std::vector<double> authority;
};

GraphCentralities compute_centralities(const Digraph& graph);

inline constexpr std::size_t kNetworkFeatureCount = 13;

// Seven scalar centralities followed by the (min, max, avg) hop distances to
// the algorithm seeds and then to the problem seeds.
struct NodeFeatures {
  std::size_t in_degree = 0;
  std::size_t out_degree = 0;
  double pagerank = 0.0;
  double betweenness = 0.0;
  double closeness = 0.0;
  double hub = 0.0;
  double authority = 0.0;
  DistanceStats algorithm_distance;
  DistanceStats problem_distance;

  std::array<double, kNetworkFeatureCount> to_array() const;
};

NodeFeatures node_features(const TermGraph& graph, const GraphCentralities& centralities,
                           NodeId node, std::span<const NodeId> algorithm_seeds,
                           std::span<const NodeId> problem_seeds);

// Precomputes the per-seed distance tables so that features for many nodes
// cost one lookup each.
class NetworkFeatureTable {
 public:
  NetworkFeatureTable(const TermGraph& graph, std::span<const NodeId> algorithm_seeds,
                      std::span<const NodeId> problem_seeds);

  NodeFeatures features(NodeId node) const;
  const GraphCentralities& centralities() const { return centralities_; }

 private:
  const TermGraph* graph_;
  GraphCentralities centralities_;
  std::vector<DistanceStats> algorithm_distance_;
  std::vector<DistanceStats> problem_distance_;
};

}  // namespace sommelier
