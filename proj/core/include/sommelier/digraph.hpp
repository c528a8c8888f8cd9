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
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace sommelier {

using NodeId = std::uint32_t;

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// Unweighted directed graph with sorted, duplicate-free adjacency lists in
// both directions. Self loops are dropped.
class Digraph {
 public:
  Digraph() = default;
  Digraph(std::size_t node_count,
          std::span<const std::pair<NodeId, NodeId>> edges);

  std::size_t node_count() const { return out_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::span<const NodeId> out_neighbors(NodeId v) const { return out_[v]; }
  std::span<const NodeId> in_neighbors(NodeId v) const { return in_[v]; }
  std::size_t out_degree(NodeId v) const { return out_[v].size(); }
  std::size_t in_degree(NodeId v) const { return in_[v].size(); }
  bool has_edge(NodeId from, NodeId to) const;

  bool operator==(const Digraph&) const = default;

 private:
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::size_t edge_count_ = 0;
};

enum class Direction { kForward, kBackward };

// Hop distances from `source`; kUnreachable where no path exists.
std::vector<std::uint32_t> bfs_distances(const Digraph& graph, NodeId source,
                                         Direction direction = Direction::kForward);

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;  // on the L1 change between iterations
  std::size_t max_iterations = 10000;
};

// Power iteration; dangling nodes spread their mass uniformly. Scores sum to 1.
std::vector<double> pagerank(const Digraph& graph, const PageRankOptions& options = {});

struct HitsScores {
  std::vector<double> hub;
  std::vector<double> authority;
};

// Mutual reinforcement from all-ones hubs: authority <- A^T hub,
// hub <- A authority, each L2-normalized per round. An edgeless graph yields
// all zeros and a warning.
HitsScores hits(const Digraph& graph, std::size_t iterations = 100);

// Directed, unnormalized betweenness via Brandes' dependency accumulation;
// endpoints excluded.
std::vector<double> betweenness(const Digraph& graph);

// Reachable count over total hop distance to the reachable nodes; 0 when
// nothing is reachable.
double closeness(const Digraph& graph, NodeId node);
std::vector<double> closeness_all(const Digraph& graph);

struct DistanceStats {
  std::uint32_t min = 0;
  std::uint32_t max = 0;
  double avg = 0.0;

  bool operator==(const DistanceStats&) const = default;
};

// Hop distances from `node` to each seed along out-links. An unreachable seed
// counts as node_count(); the node itself, when a seed, counts as 0. Throws
// Error(kConfig) for an empty seed set.
DistanceStats seed_distance_stats(const Digraph& graph, NodeId node,
                                  std::span<const NodeId> seeds);

// Same statistics for every node at once: one reverse BFS per seed.
std::vector<DistanceStats> seed_distance_stats_all(const Digraph& graph,
                                                   std::span<const NodeId> seeds);

}  // namespace sommelier
