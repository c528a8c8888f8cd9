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

#include "sommelier/term_graph.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "sommelier/error.hpp"
#include "sommelier/text.hpp"

namespace sommelier {
namespace {

using nlohmann::json;

std::vector<std::string> string_array(const json& doc, const char* field) {
  std::vector<std::string> out;
  auto it = doc.find(field);
  if (it == doc.end()) return out;
  if (!it->is_array()) {
    throw Error(ErrorKind::kParse, std::string("\"") + field + "\" must be an array");
  }
  for (const auto& item : *it) {
    if (!item.is_string()) {
      throw Error(ErrorKind::kParse, std::string("\"") + field + "\" must hold strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

// FNV-1a; only needs to be stable across runs of the same build.
class Fingerprint {
 public:
  void add(std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash_ ^= c;
      hash_ *= 1099511628211ull;
    }
    add_separator();
  }
  void add(std::uint64_t value) {
    for (int k = 0; k < 8; ++k) {
      hash_ ^= (value >> (8 * k)) & 0xffu;
      hash_ *= 1099511628211ull;
    }
  }
  std::uint64_t value() const { return hash_; }

 private:
  void add_separator() {
    hash_ ^= 0xffu;
    hash_ *= 1099511628211ull;
  }
  std::uint64_t hash_ = 14695981039346656037ull;
};

}  // namespace

TermGraph TermGraph::from_records(std::span<const PageRecord> records) {
  TermGraph graph;
  for (const auto& record : records) {
    auto title = try_normalize_keyword(record.title);
    if (!title) {
      throw Error(ErrorKind::kParse, "page with empty title");
    }
    Page page;
    page.title = *title;
    page.text = record.text;
    for (const auto& category : record.categories) {
      if (auto c = try_normalize_keyword(category)) page.categories.push_back(*c);
    }
    if (!graph.index_.emplace(page.title, graph.pages_.size()).second) {
      throw Error(ErrorKind::kStructure, "duplicate page title '" + page.title + "'");
    }
    graph.pages_.push_back(std::move(page));
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t from = 0; from < records.size(); ++from) {
    for (const auto& link : records[from].links) {
      auto target = try_normalize_keyword(link);
      if (!target) continue;
      auto [it, inserted] = graph.index_.emplace(*target, graph.pages_.size());
      if (inserted) {
        graph.pages_.push_back(Page{*target, {}, {}, true});
      }
      edges.emplace_back(static_cast<NodeId>(from), it->second);
    }
  }
  graph.links_ = Digraph(graph.pages_.size(), edges);
  return graph;
}

std::optional<NodeId> TermGraph::find(std::string_view title) const {
  auto it = index_.find(std::string(title));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId TermGraph::at(std::string_view title) const {
  auto id = find(title);
  if (!id) throw Error(ErrorKind::kLookup, "unknown page '" + std::string(title) + "'");
  return *id;
}

std::uint64_t TermGraph::content_hash() const {
  Fingerprint fp;
  for (NodeId v = 0; v < pages_.size(); ++v) {
    const Page& p = pages_[v];
    fp.add(p.title);
    fp.add(p.text);
    for (const auto& c : p.categories) fp.add(c);
    fp.add(static_cast<std::uint64_t>(p.stub));
    for (NodeId w : links_.out_neighbors(v)) fp.add(static_cast<std::uint64_t>(w));
    fp.add(~0ull);
  }
  return fp.value();
}

TermGraph load_graph(std::istream& in) {
  std::vector<PageRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "pages line " + std::to_string(line_number) + ": ";
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw Error(ErrorKind::kParse, where + "not a JSON object");
    }
    try {
      PageRecord record;
      auto title = doc.find("title");
      if (title == doc.end() || !title->is_string()) {
        throw Error(ErrorKind::kParse, "missing \"title\"");
      }
      record.title = title->get<std::string>();
      if (auto text = doc.find("text"); text != doc.end()) {
        if (!text->is_string()) throw Error(ErrorKind::kParse, "\"text\" must be a string");
        record.text = text->get<std::string>();
      }
      record.categories = string_array(doc, "categories");
      record.links = string_array(doc, "links");
      records.push_back(std::move(record));
    } catch (const Error& e) {
      throw Error(e.kind(), where + e.what());
    }
  }
  return TermGraph::from_records(records);
}

TermGraph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return load_graph(in);
}

GraphCentralities compute_centralities(const Digraph& graph) {
  GraphCentralities c;
  c.pagerank = pagerank(graph);
  c.betweenness = betweenness(graph);
  c.closeness = closeness_all(graph);
  HitsScores h = hits(graph);
  c.hub = std::move(h.hub);
  c.authority = std::move(h.authority);

  double total = 0.0;
  for (double r : c.pagerank) total += r;
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::kStructure, "pagerank scores do not sum to 1");
  }
  if (graph.edge_count() > 0) {
    for (const auto* scores : {&c.hub, &c.authority}) {
      double norm = 0.0;
      for (double x : *scores) norm += x * x;
      if (std::abs(std::sqrt(norm) - 1.0) > 1e-9) {
        throw Error(ErrorKind::kStructure, "HITS scores are not unit-normalized");
      }
    }
  }
  return c;
}

std::array<double, kNetworkFeatureCount> NodeFeatures::to_array() const {
  return {static_cast<double>(in_degree),
          static_cast<double>(out_degree),
          pagerank,
          betweenness,
          closeness,
          hub,
          authority,
          static_cast<double>(algorithm_distance.min),
          static_cast<double>(algorithm_distance.max),
          algorithm_distance.avg,
          static_cast<double>(problem_distance.min),
          static_cast<double>(problem_distance.max),
          problem_distance.avg};
}

NodeFeatures node_features(const TermGraph& graph, const GraphCentralities& centralities,
                           NodeId node, std::span<const NodeId> algorithm_seeds,
                           std::span<const NodeId> problem_seeds) {
  if (node >= graph.node_count()) {
    throw Error(ErrorKind::kLookup, "unknown node id " + std::to_string(node));
  }
  const Digraph& g = graph.links();
  NodeFeatures f;
  f.in_degree = g.in_degree(node);
  f.out_degree = g.out_degree(node);
  f.pagerank = centralities.pagerank[node];
  f.betweenness = centralities.betweenness[node];
  f.closeness = centralities.closeness[node];
  f.hub = centralities.hub[node];
  f.authority = centralities.authority[node];
  f.algorithm_distance = seed_distance_stats(g, node, algorithm_seeds);
  f.problem_distance = seed_distance_stats(g, node, problem_seeds);
  return f;
}

NetworkFeatureTable::NetworkFeatureTable(const TermGraph& graph,
                                         std::span<const NodeId> algorithm_seeds,
                                         std::span<const NodeId> problem_seeds)
    : graph_(&graph),
      centralities_(compute_centralities(graph.links())),
      algorithm_distance_(seed_distance_stats_all(graph.links(), algorithm_seeds)),
      problem_distance_(seed_distance_stats_all(graph.links(), problem_seeds)) {}

NodeFeatures NetworkFeatureTable::features(NodeId node) const {
  if (node >= graph_->node_count()) {
    throw Error(ErrorKind::kLookup, "unknown node id " + std::to_string(node));
  }
  const Digraph& g = graph_->links();
  NodeFeatures f;
  f.in_degree = g.in_degree(node);
  f.out_degree = g.out_degree(node);
  f.pagerank = centralities_.pagerank[node];
  f.betweenness = centralities_.betweenness[node];
  f.closeness = centralities_.closeness[node];
  f.hub = centralities_.hub[node];
  f.authority = centralities_.authority[node];
  f.algorithm_distance = algorithm_distance_[node];
  f.problem_distance = problem_distance_[node];
  return f;
}

}  // namespace sommelier
