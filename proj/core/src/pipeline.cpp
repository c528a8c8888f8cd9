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

#include "sommelier/pipeline.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "sommelier/cooccurrence.hpp"
#include "sommelier/corpus.hpp"
#include "sommelier/embedding.hpp"
#include "sommelier/evaluation.hpp"
#include "sommelier/io.hpp"
#include "sommelier/kb_builder.hpp"
#include "sommelier/recommender.hpp"
#include "sommelier/service.hpp"
#include "sommelier/term_graph.hpp"

namespace sommelier {
namespace {

using nlohmann::json;

const std::filesystem::path& input(const std::filesystem::path& path, const char* flag) {
  if (path.empty()) throw Error(ErrorKind::kConfig, std::string("--") + flag + " is required");
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorKind::kIo, std::string("--") + flag + ": no such file " + path.string());
  }
  return path;
}

const std::filesystem::path& output(const std::filesystem::path& path, const char* flag) {
  if (path.empty()) throw Error(ErrorKind::kConfig, std::string("--") + flag + " is required");
  return path;
}

template <typename Writer>
void write_artifact(const std::filesystem::path& path, Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  io::write_file_atomic(path, buffer.str());
}

Corpus load_corpus(const PipelineConfig& c) {
  Corpus corpus = ingest_papers_file(input(c.papers, "papers"));
  spdlog::info("{} papers kept, {} dropped without keywords, {} lines rejected",
               corpus.records.size(), corpus.dropped_empty, corpus.issues.size());
  return corpus;
}

KnowledgeBase load_kb(const PipelineConfig& c) {
  KnowledgeBase kb{read_kb_file(input(c.kb_algorithms, "kb-algorithms")),
                   read_kb_file(input(c.kb_problems, "kb-problems"))};
  kb.validate();
  return kb;
}

void run_ingest(const PipelineConfig& c) {
  const Corpus corpus = load_corpus(c);
  output(c.vocab, "vocab");
  const Vocabulary vocabulary = c.threads > 1
                                    ? build_vocabulary_parallel(corpus, c.min_count, c.threads)
                                    : build_vocabulary(corpus, c.min_count);
  write_artifact(c.vocab, [&](std::ostream& o) { write_vocabulary_tsv(o, vocabulary); });
  spdlog::info("vocabulary: {} terms with count >= {}", vocabulary.size(), c.min_count);
}

void run_cooccur(const PipelineConfig& c) {
  const Vocabulary vocabulary = read_vocabulary_file(input(c.vocab, "vocab"));
  const Corpus corpus = load_corpus(c);
  output(c.cooccur, "cooccur");
  const CooccurrenceMatrix matrix = c.threads > 1
                                        ? build_matrix_parallel(corpus, vocabulary, c.threads)
                                        : build_matrix(corpus, vocabulary);
  write_artifact(c.cooccur, [&](std::ostream& o) { write_cooccurrence_tsv(o, matrix); });
  spdlog::info("co-occurrence: {} pairs over {} terms", matrix.pair_count(),
               matrix.vocabulary_size());
}

void run_train(const PipelineConfig& c) {
  const Vocabulary vocabulary = read_vocabulary_file(input(c.vocab, "vocab"));
  const CooccurrenceMatrix matrix =
      read_cooccurrence_file(input(c.cooccur, "cooccur"), vocabulary);
  output(c.vectors, "vectors");
  const WeightingConfig weighting{c.alpha, c.x_max};
  EmbeddingModel model = init_model(matrix.terms(), c.dim, c.seed);
  const TrainingReport report =
      train(model, matrix, weighting, {c.iterations, c.learning_rate, c.threads});
  spdlog::info("training: loss {} -> {} after {} iterations", report.initial_loss,
               report.final_loss(), report.iterations);
  if (!c.checkpoint.empty()) save_checkpoint(c.checkpoint, model, weighting);
  const VectorStore vectors = export_vectors(model);
  write_artifact(c.vectors, [&](std::ostream& o) { write_vectors_tsv(o, vectors); });
}

void run_build_kb(const PipelineConfig& c) {
  const TermGraph graph = load_graph_file(input(c.pages, "pages"));
  const SeedConfig seeds = read_seed_config_file(input(c.seeds, "seeds"));
  std::vector<ReviewOverride> overrides;
  if (!c.overrides.empty()) overrides = read_review_overrides_file(input(c.overrides, "overrides"));
  const VectorStore vectors = read_vectors_file(input(c.vectors, "vectors"));
  output(c.kb_algorithms, "kb-algorithms");
  output(c.kb_problems, "kb-problems");

  KbBuildOptions options;
  options.seed = c.seed;
  options.select_k = c.select_k;
  options.lev_threshold = c.lev_threshold;
  const KbBuildResult result =
      build_knowledge_base(graph, seeds, overrides, vectors.terms(), options);
  const KnowledgeBase& kb = result.knowledge_base;
  write_artifact(c.kb_algorithms, [&](std::ostream& o) { write_kb_tsv(o, kb.algorithms); });
  write_artifact(c.kb_problems, [&](std::ostream& o) { write_kb_tsv(o, kb.problems); });
  auto mapped = [](const std::vector<KbTerm>& terms) {
    return std::count_if(terms.begin(), terms.end(), [](const KbTerm& t) { return t.match; });
  };
  spdlog::info("knowledge base: {} algorithms ({} mapped), {} problems ({} mapped)",
               kb.algorithms.size(), mapped(kb.algorithms), kb.problems.size(),
               mapped(kb.problems));
}

void run_recommend(const PipelineConfig& c, std::ostream& out) {
  const VectorStore vectors = read_vectors_file(input(c.vectors, "vectors"));
  const KnowledgeBase kb = load_kb(c);
  const Recommender recommender(vectors, kb);
  out << recommendation_to_json(recommender.recommend(c.title, c.description, c.top_k)) << '\n';
}

void run_evaluate(const PipelineConfig& c, std::ostream& out) {
  const VectorStore vectors = read_vectors_file(input(c.vectors, "vectors"));
  const KnowledgeBase kb = load_kb(c);
  const AccuracyMatrix matrix = read_accuracy_file(input(c.accuracy, "accuracy"));
  const ImplementationMap map = read_impl_map_file(input(c.impl_map, "impl-map"));
  const auto descriptions = read_datasets_file(input(c.datasets, "datasets"));
  for (const auto& algorithm : map.algorithms()) {
    const bool known = std::any_of(kb.algorithms.begin(), kb.algorithms.end(),
                                   [&](const KbTerm& t) { return t.term == algorithm; });
    if (!known) spdlog::warn("mapped algorithm '{}' is not in the knowledge base", algorithm);
  }
  const Recommender recommender(vectors, kb);
  EvaluateOptions options;
  options.curve_k_max = c.curve_k_max;
  options.baseline_algorithm = c.baseline;
  options.threads = c.threads;
  const std::string report =
      report_to_json(evaluate(recommender, descriptions, matrix, map, options));
  if (c.report.empty()) {
    out << report;
  } else {
    io::write_file_atomic(c.report, report);
  }
}

void run_serve(const PipelineConfig& c) {
  RecommendationService service(read_vectors_file(input(c.vectors, "vectors")), load_kb(c));
  service.serve(c.host, c.port);
}

std::string flag_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

}  // namespace

void PipelineConfig::validate() const {
  auto require = [](bool ok, const char* message) {
    if (!ok) throw Error(ErrorKind::kConfig, message);
  };
  require(min_count >= 1, "--min-count must be at least 1");
  require(dim >= 1, "--dim must be at least 1");
  require(iterations >= 1, "--iterations must be at least 1");
  require(alpha > 0.0, "--alpha must be positive");
  require(x_max > 0.0, "--x-max must be positive");
  require(learning_rate > 0.0, "--learning-rate must be positive");
  require(lev_threshold >= 0.0 && lev_threshold <= 1.0, "--lev-threshold must be in [0, 1]");
  require(top_k >= 1, "--top-k must be at least 1");
  require(select_k >= 1, "--select-k must be at least 1");
  require(port >= 0 && port <= 65535, "--port must be in [0, 65535]");
  require(threads >= 1, "--threads must be at least 1");
}

void apply_config_json(PipelineConfig& c, std::string_view json_text) {
  json doc = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::kConfig, "config: not a JSON object");
  }
  for (const auto& [raw_key, value] : doc.items()) {
    const std::string key = flag_key(raw_key);
    try {
      if (key == "papers") c.papers = value.get<std::string>();
      else if (key == "pages") c.pages = value.get<std::string>();
      else if (key == "vocab") c.vocab = value.get<std::string>();
      else if (key == "cooccur") c.cooccur = value.get<std::string>();
      else if (key == "vectors") c.vectors = value.get<std::string>();
      else if (key == "kb-algorithms") c.kb_algorithms = value.get<std::string>();
      else if (key == "kb-problems") c.kb_problems = value.get<std::string>();
      else if (key == "accuracy") c.accuracy = value.get<std::string>();
      else if (key == "impl-map") c.impl_map = value.get<std::string>();
      else if (key == "datasets") c.datasets = value.get<std::string>();
      else if (key == "seeds") c.seeds = value.get<std::string>();
      else if (key == "overrides") c.overrides = value.get<std::string>();
      else if (key == "report") c.report = value.get<std::string>();
      else if (key == "checkpoint") c.checkpoint = value.get<std::string>();
      else if (key == "title") c.title = value.get<std::string>();
      else if (key == "description") c.description = value.get<std::string>();
      else if (key == "min-count") c.min_count = value.get<long long>();
      else if (key == "dim") c.dim = value.get<std::size_t>();
      else if (key == "iterations") c.iterations = value.get<std::size_t>();
      else if (key == "alpha") c.alpha = value.get<double>();
      else if (key == "x-max") c.x_max = value.get<double>();
      else if (key == "learning-rate") c.learning_rate = value.get<double>();
      else if (key == "lev-threshold") c.lev_threshold = value.get<double>();
      else if (key == "top-k") c.top_k = value.get<std::size_t>();
      else if (key == "select-k") c.select_k = value.get<std::size_t>();
      else if (key == "curve-k") c.curve_k_max = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "baseline") c.baseline = value.get<std::string>();
      else if (key == "host") c.host = value.get<std::string>();
      else if (key == "port") c.port = value.get<int>();
      else if (key == "threads") c.threads = value.get<unsigned>();
      else throw Error(ErrorKind::kConfig, "config: unknown key '" + raw_key + "'");
    } catch (const json::exception&) {
      throw Error(ErrorKind::kConfig, "config: wrong type for '" + raw_key + "'");
    }
  }
}

void run_command(std::string_view name, const PipelineConfig& config, std::ostream& out) {
  config.validate();
  if (name == "ingest") return run_ingest(config);
  if (name == "cooccur") return run_cooccur(config);
  if (name == "train") return run_train(config);
  if (name == "build-kb") return run_build_kb(config);
  if (name == "recommend") return run_recommend(config, out);
  if (name == "evaluate") return run_evaluate(config, out);
  if (name == "serve") return run_serve(config);
  throw Error(ErrorKind::kConfig, "unknown command '" + std::string(name) + "'");
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return 2;
    case ErrorKind::kNoMatch: return 3;
    case ErrorKind::kIo: return 4;
    case ErrorKind::kParse: return 5;
    default: return 1;
  }
}

std::string error_line(const Error& error) {
  const json line{{"error", error.what()}, {"kind", std::string(to_string(error.kind()))}};
  return line.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace sommelier
