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

// sommelier: pipeline driver.
//
//   sommelier ingest    --papers papers.jsonl --vocab vocab.tsv
//   sommelier cooccur   --papers papers.jsonl --vocab vocab.tsv --cooccur cooccur.tsv
//   sommelier train     --vocab vocab.tsv --cooccur cooccur.tsv --vectors vectors.tsv
//   sommelier build-kb  --pages pages.jsonl --seeds seeds.json --vectors vectors.tsv
//                       --kb-algorithms kb_algorithms.tsv --kb-problems kb_problems.tsv
//   sommelier recommend --vectors ... --kb-algorithms ... --kb-problems ... --title ...
//   sommelier evaluate  --vectors ... --kb-* ... --accuracy ... --impl-map ... --datasets ...
//   sommelier serve     --vectors ... --kb-* ... --port 8080
//
// SOMMELIER_CONFIG may name a JSON file of flag defaults; flags on the command
// line win.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sommelier/error.hpp"
#include "sommelier/io.hpp"
#include "sommelier/pipeline.hpp"

namespace {

void add_path(CLI::App& app, const char* flag, std::filesystem::path& target,
              const char* help) {
  app.add_option(flag, target, help)->type_name("PATH");
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("sommelier"));
  spdlog::set_pattern("%^%l%$: %v");

  sommelier::PipelineConfig config;
  try {
    if (const char* path = std::getenv("SOMMELIER_CONFIG"); path && *path) {
      sommelier::apply_config_json(config, sommelier::io::read_file(path));
    }
  } catch (const sommelier::Error& e) {
    std::cerr << sommelier::error_line(e) << '\n';
    return sommelier::exit_code(e.kind());
  }

  CLI::App app{"Algorithm recommendation from keyword embeddings"};
  std::string command;
  std::vector<std::string> names(sommelier::command_names().begin(),
                                 sommelier::command_names().end());
  app.add_option("command", command, "Pipeline step")->required()->check(CLI::IsMember(names));

  add_path(app, "--papers", config.papers, "papers.jsonl");
  add_path(app, "--pages", config.pages, "pages.jsonl");
  add_path(app, "--vocab", config.vocab, "vocab.tsv");
  add_path(app, "--cooccur", config.cooccur, "cooccur.tsv");
  add_path(app, "--vectors", config.vectors, "vectors.tsv");
  add_path(app, "--kb-algorithms", config.kb_algorithms, "kb_algorithms.tsv");
  add_path(app, "--kb-problems", config.kb_problems, "kb_problems.tsv");
  add_path(app, "--accuracy", config.accuracy, "accuracy.csv");
  add_path(app, "--impl-map", config.impl_map, "impl_map.tsv");
  add_path(app, "--datasets", config.datasets, "datasets.jsonl");
  add_path(app, "--seeds", config.seeds, "seeds.json");
  add_path(app, "--overrides", config.overrides, "review_overrides.tsv");
  add_path(app, "--report", config.report, "report.json (stdout when omitted)");
  add_path(app, "--checkpoint", config.checkpoint, "checkpoint directory written by train");

  app.add_option("--title", config.title, "Dataset title");
  app.add_option("--description", config.description, "Dataset description");
  app.add_option("--min-count", config.min_count, "Minimum keyword count");
  app.add_option("--dim", config.dim, "Embedding size");
  app.add_option("--iterations", config.iterations, "Training passes");
  app.add_option("--alpha", config.alpha, "Weighting exponent");
  app.add_option("--x-max", config.x_max, "Weighting saturation");
  app.add_option("--learning-rate", config.learning_rate, "AdaGrad step size");
  app.add_option("--lev-threshold", config.lev_threshold, "Vocabulary match threshold");
  app.add_option("--top-k", config.top_k, "Recommendations returned");
  app.add_option("--select-k", config.select_k, "Candidate terms kept per class");
  app.add_option("--curve-k", config.curve_k_max, "Top-k curve length (0: full)");
  app.add_option("--seed", config.seed, "Random seed");
  app.add_option("--baseline", config.baseline, "Fixed-algorithm baseline");
  app.add_option("--host", config.host, "Bind address");
  app.add_option("--port", config.port, "Listen port");
  app.add_option("--threads", config.threads, "Worker threads");
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : 2;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    sommelier::run_command(command, config, std::cout);
  } catch (const sommelier::Error& e) {
    std::cerr << sommelier::error_line(e) << '\n';
    return sommelier::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << sommelier::error_line(sommelier::Error(sommelier::ErrorKind::kIo, e.what()))
              << '\n';
    return 1;
  }
  return 0;
}
