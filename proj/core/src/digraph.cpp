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

#include "sommelier/digraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <spdlog/spdlog.h>

#include "sommelier/error.hpp"

namespace sommelier {
namespace {

void normalize_l2(std::vector<double>& v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) return;
  for (double& x : v) x /= norm;
}

DistanceStats summarize(std::span<const std::uint32_t> distances) {
  DistanceStats stats{distances.front(), distances.front(), 0.0};
  double sum = 0.0;
  for (auto d : distances) {
    stats.min = std::min(stats.min, d);
    stats.max = std::max(stats.max, d);
    sum += d;
  }
  stats.avg = sum / static_cast<double>(distances.size());
  return stats;
}

}  // namespace

Digraph::Digraph(std::size_t node_count,
                 std::span<const std::pair<NodeId, NodeId>> edges)
    : out_(node_count), in_(node_count) {
  for (const auto& [from, to] : edges) {
    if (from >= node_count || to >= node_count) {
      throw Error(ErrorKind::kStructure, "edge endpoint out of range");
    }
    if (from == to) continue;
    out_[from].push_back(to);
  }
  for (NodeId v = 0; v < node_count; ++v) {
    auto& list = out_[v];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    edge_count_ += list.size();
    for (NodeId w : list) in_[w].push_back(v);
  }
}

bool Digraph::has_edge(NodeId from, NodeId to) const {
  return std::binary_search(out_[from].begin(), out_[from].end(), to);
}

std::vector<std::uint32_t> bfs_distances(const Digraph& graph, NodeId source,
                                         Direction direction) {
  std::vector<std::uint32_t> dist(graph.node_count(), kUnreachable);
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    const auto next = direction == Direction::kForward ? graph.out_neighbors(v)
                                                       : graph.in_neighbors(v);
    for (NodeId w : next) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<double> pagerank(const Digraph& graph, const PageRankOptions& options) {
  const std::size_t n = graph.node_count();
  if (n == 0) throw Error(ErrorKind::kInput, "pagerank of an empty graph");
  const double d = options.damping;
  std::vector<double> rank(n, 1.0 / n), next(n);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    double dangling = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      if (graph.out_degree(v) == 0) dangling += rank[v];
    }
    const double base = (1.0 - d) / n + d * dangling / n;
    std::fill(next.begin(), next.end(), base);
    for (NodeId v = 0; v < n; ++v) {
      const auto out = graph.out_neighbors(v);
      if (out.empty()) continue;
      const double share = d * rank[v] / static_cast<double>(out.size());
      for (NodeId w : out) next[w] += share;
    }
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) change += std::abs(next[v] - rank[v]);
    rank.swap(next);
    if (change < options.tolerance) break;
  }
  double total = 0.0;
  for (double r : rank) total += r;
  for (double& r : rank) r /= total;
  return rank;
}

HitsScores hits(const Digraph& graph, std::size_t iterations) {
  const std::size_t n = graph.node_count();
  HitsScores scores{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  if (graph.edge_count() == 0) {
    spdlog::warn("HITS on an edgeless graph: all hub and authority scores are 0");
    return scores;
  }
  std::fill(scores.hub.begin(), scores.hub.end(), 1.0);
  for (std::size_t it = 0; it < iterations; ++it) {
    for (NodeId v = 0; v < n; ++v) {
      double a = 0.0;
      for (NodeId u : graph.in_neighbors(v)) a += scores.hub[u];
      scores.authority[v] = a;
    }
    normalize_l2(scores.authority);
    for (NodeId v = 0; v < n; ++v) {
      double h = 0.0;
      for (NodeId w : graph.out_neighbors(v)) h += scores.authority[w];
      scores.hub[v] = h;
    }
    normalize_l2(scores.hub);
  }
  return scores;
}

std::vector<double> betweenness(const Digraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<double> centrality(n, 0.0);
  std::vector<std::uint32_t> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<NodeId> order;
  order.reserve(n);
  std::deque<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnreachable);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    queue.push_back(s);
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (NodeId w : graph.out_neighbors(v)) {
        if (dist[w] == kUnreachable) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    // Predecessors of w on shortest paths are its in-neighbours one hop closer.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId v : graph.in_neighbors(w)) {
        if (dist[v] != kUnreachable && dist[v] + 1 == dist[w]) {
          delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
      }
      if (w != s) centrality[w] += delta[w];
    }
  }
  return centrality;
}

double closeness(const Digraph& graph, NodeId node) {
  const auto dist = bfs_distances(graph, node);
  std::size_t reachable = 0;
  double total = 0.0;
  for (NodeId v = 0; v < dist.size(); ++v) {
    if (v == node || dist[v] == kUnreachable) continue;
    ++reachable;
    total += dist[v];
  }
  return reachable == 0 ? 0.0 : static_cast<double>(reachable) / total;
}

std::vector<double> closeness_all(const Digraph& graph) {
  std::vector<double> out(graph.node_count());
  for (NodeId v = 0; v < out.size(); ++v) out[v] = closeness(graph, v);
  return out;
}

DistanceStats seed_distance_stats(const Digraph& graph, NodeId node,
                                  std::span<const NodeId> seeds) {
  if (seeds.empty()) throw Error(ErrorKind::kConfig, "seed set is empty");
  const auto dist = bfs_distances(graph, node);
  const auto sentinel = static_cast<std::uint32_t>(graph.node_count());
  std::vector<std::uint32_t> hops;
  hops.reserve(seeds.size());
  for (NodeId seed : seeds) {
    hops.push_back(dist[seed] == kUnreachable ? sentinel : dist[seed]);
  }
  return summarize(hops);
}

std::vector<DistanceStats> seed_distance_stats_all(const Digraph& graph,
                                                   std::span<const NodeId> seeds) {
  if (seeds.empty()) throw Error(ErrorKind::kConfig, "seed set is empty");
  const std::size_t n = graph.node_count();
  const auto sentinel = static_cast<std::uint32_t>(n);
  // to_seed[k][v] = hops from v to seeds[k].
  std::vector<std::vector<std::uint32_t>> to_seed;
  to_seed.reserve(seeds.size());
  for (NodeId seed : seeds) {
    to_seed.push_back(bfs_distances(graph, seed, Direction::kBackward));
  }
  std::vector<DistanceStats> out(n);
  std::vector<std::uint32_t> hops(seeds.size());
  for (NodeId v = 0; v < n; ++v) {
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      hops[k] = to_seed[k][v] == kUnreachable ? sentinel : to_seed[k][v];
    }
    out[v] = summarize(hops);
  }
  return out;
}

}  // namespace sommelier
