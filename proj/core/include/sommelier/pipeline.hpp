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
#include <string>
#include <string_view>
#include <vector>

#include "sommelier/error.hpp"

namespace sommelier {

struct PipelineConfig {
  std::filesystem::path papers;
  std::filesystem::path pages;
  std::filesystem::path vocab;
  std::filesystem::path cooccur;
  std::filesystem::path vectors;
  std::filesystem::path kb_algorithms;
  std::filesystem::path kb_problems;
  std::filesystem::path accuracy;
  std::filesystem::path impl_map;
  std::filesystem::path datasets;
  std::filesystem::path seeds;       // seeds.json
  std::filesystem::path overrides;   // review_overrides.tsv, optional
  std::filesystem::path report;      // report.json; stdout when empty
  std::filesystem::path checkpoint;  // optional checkpoint directory

  std::string title;
  std::string description;

  long long min_count = 5;
  std::size_t dim = 200;
  std::size_t iterations = 20;
  double alpha = 0.75;
  double x_max = 10.0;
  double learning_rate = 0.05;
  double lev_threshold = 0.35;
  std::size_t top_k = 10;
  std::size_t select_k = 2000;
  std::size_t curve_k_max = 0;
  std::uint64_t seed = 42;
  std::string baseline = "random_forest";
  std::string host = "127.0.0.1";
  int port = 8080;
  unsigned threads = 1;

  // Throws Error(kConfig) for an out-of-range hyperparameter.
  void validate() const;
};

// Applies a JSON object whose keys are flag names ("min-count" or
// "min_count"). Unknown keys are rejected with Error(kConfig).
void apply_config_json(PipelineConfig& config, std::string_view json_text);

inline const std::vector<std::string_view>& command_names() {
  static const std::vector<std::string_view> names{
      "ingest", "cooccur", "train", "build-kb", "recommend", "evaluate", "serve"};
  return names;
}

// Reads the command's inputs and writes its outputs atomically. recommend
// prints its JSON result to `out`, as does evaluate without a report path.
void run_command(std::string_view name, const PipelineConfig& config, std::ostream& out);

// Process exit status for a failure of the given kind.
int exit_code(ErrorKind kind);

// One-line machine-parseable error: {"error": message, "kind": kind}.
std::string error_line(const Error& error);

}  // namespace sommelier
