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
#include <string>
#include <vector>

namespace sommelier::fixture {

// A small synthetic world: papers in which problem i co-occurs (recently and
// often) with exactly one algorithm, a page graph that seeds those terms, and
// an accuracy table over datasets that describe each problem.
struct FixtureOptions {
  std::uint64_t seed = 7;
  // Selects the algorithm <-> problem pairing; variant 0 pairs them in order.
  std::size_t variant = 0;
  std::size_t papers_per_pair = 30;
  std::size_t background_papers = 200;
  std::size_t other_pages = 60;
};

struct Fixture {
  std::vector<std::string> algorithms;  // normalized terms
  std::vector<std::string> problems;    // problems[i] pairs with paired_algorithm[i]
  std::vector<std::string> paired_algorithm;
  std::vector<std::string> fillers;

  std::string papers_jsonl;
  std::string pages_jsonl;
  std::string seeds_json;
  std::string overrides_tsv;
  std::string accuracy_csv;
  std::string impl_map_tsv;
  std::string datasets_jsonl;

  // Human query text for problem i, e.g. "speech recognition dataset".
  std::string query_for(std::size_t problem) const;
};

Fixture make_fixture(const FixtureOptions& options = {});

// papers.jsonl, pages.jsonl, seeds.json, review_overrides.tsv, accuracy.csv,
// impl_map.tsv and datasets.jsonl.
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace sommelier::fixture
