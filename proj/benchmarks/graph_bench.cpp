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

#include <benchmark/benchmark.h>

#include <random>

#include "sommelier/digraph.hpp"

namespace {

using namespace sommelier;

// Sparse random digraph with the given average out-degree.
Digraph random_graph(std::size_t n, std::size_t degree) {
  std::mt19937_64 rng(5);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (std::size_t k = 0; k < degree; ++k) edges.emplace_back(u, static_cast<NodeId>(rng() % n));
  }
  return Digraph(n, edges);
}

void BM_Betweenness(benchmark::State& state) {
  const Digraph g = random_graph(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(betweenness(g));
}
BENCHMARK(BM_Betweenness)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_PageRank(benchmark::State& state) {
  const Digraph g = random_graph(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(pagerank(g));
}
BENCHMARK(BM_PageRank)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_Hits(benchmark::State& state) {
  const Digraph g = random_graph(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(hits(g));
}
BENCHMARK(BM_Hits)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace
