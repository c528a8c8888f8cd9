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

// Acceptance checks. Prints one PASS / FAIL / SKIP line per criterion and
// exits non-zero when any criterion fails.

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <httplib.h>
#include <mutex>
#include <json.hpp>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "sommelier/cooccurrence.hpp"
#include "sommelier/corpus.hpp"
#include "sommelier/digraph.hpp"
#include "sommelier/embedding.hpp"
#include "sommelier/error.hpp"
#include "sommelier/evaluation.hpp"
#include "sommelier/fixture.hpp"
#include "sommelier/io.hpp"
#include "sommelier/kb_builder.hpp"
#include "sommelier/pipeline.hpp"
#include "sommelier/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sommelier;
using Clock = std::chrono::steady_clock;

namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status;
  std::string detail;
};

// Collects failed sub-checks so one line can report all of them.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  Outcome outcome(std::string pass_detail) const {
    if (failures_.empty()) return {Status::kPass, std::move(pass_detail)};
    std::string joined;
    for (const auto& f : failures_) joined += (joined.empty() ? "" : "; ") + f;
    return {Status::kFail, joined};
  }

 private:
  std::vector<std::string> failures_;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sommelier_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

PipelineConfig config_in(const fs::path& dir) {
  PipelineConfig c;
  c.papers = dir / "papers.jsonl";
  c.pages = dir / "pages.jsonl";
  c.seeds = dir / "seeds.json";
  c.overrides = dir / "review_overrides.tsv";
  c.accuracy = dir / "accuracy.csv";
  c.impl_map = dir / "impl_map.tsv";
  c.datasets = dir / "datasets.jsonl";
  c.vocab = dir / "vocab.tsv";
  c.cooccur = dir / "cooccur.tsv";
  c.vectors = dir / "vectors.tsv";
  c.kb_algorithms = dir / "kb_algorithms.tsv";
  c.kb_problems = dir / "kb_problems.tsv";
  c.report = dir / "report.json";
  return c;
}

void run_pipeline(const PipelineConfig& c) {
  std::ostringstream sink;
  for (auto cmd : {"ingest", "cooccur", "train", "build-kb", "evaluate"}) run_command(cmd, c, sink);
}

Outcome headline_targets() {
  return {Status::kSkip,
          "documented targets only (mean 97.7 / stdev 3, MRR 0.28 / 0.36, mean ranks 3.5 / 2.7); "
          "they need the original 461,420-paper corpus and wiki snapshot"};
}

Outcome baseline_reproduction() {
  const fs::path dir = fs::path(SOMMELIER_SOURCE_DIR) / "data" / "uci121";
  const fs::path matrix_path = dir / "accuracy.csv";
  if (!fs::exists(matrix_path)) {
    return {Status::kSkip, "published accuracy matrix not present at " + matrix_path.string()};
  }
  const auto start = Clock::now();
  const AccuracyMatrix matrix = read_accuracy_file(matrix_path);
  const ImplementationMap map = read_impl_map_file(dir / "impl_map.tsv");
  const BaselineResult rf = baseline_fixed_algorithm(matrix, map, "random_forest");
  const double elapsed = seconds_since(start);
  Checks c;
  c.expect(std::abs(rf.mean - 96.4) <= 0.5, "mean " + fmt(rf.mean, 2) + " not within 96.4 +- 0.5");
  c.expect(std::abs(rf.stdev - 7.0) <= 0.5, "stdev " + fmt(rf.stdev, 2) + " not within 7 +- 0.5");
  c.expect(rf.wins == 18, "wins " + std::to_string(rf.wins) + " != 18");
  c.expect(matrix.datasets().size() == 121,
           std::to_string(matrix.datasets().size()) + " datasets, expected 121");
  c.expect(elapsed < 60.0, "took " + fmt(elapsed, 1) + " s");
  return c.outcome("random_forest mean " + fmt(rf.mean, 2) + ", stdev " + fmt(rf.stdev, 2) +
                   ", wins " + std::to_string(rf.wins) + "/" +
                   std::to_string(matrix.datasets().size()));
}

Outcome embedding_numerics() {
  Checks c;
  // Training on the bundled 50-term corpus.
  const auto fx = fixture::make_fixture();
  std::istringstream papers(fx.papers_jsonl);
  const Corpus corpus = ingest_papers(papers);
  const Vocabulary vocab = build_vocabulary(corpus, 5);
  const CooccurrenceMatrix x = build_matrix(corpus, vocab);
  EmbeddingModel model = init_model(x.terms(), 200, 42);
  const auto start = Clock::now();
  const TrainingReport r = train(model, x, {}, {.iterations = 200});
  const double elapsed = seconds_since(start);
  const double ratio = r.final_loss() / r.initial_loss;
  c.expect(vocab.size() == 50, "vocabulary has " + std::to_string(vocab.size()) + " terms, not 50");
  c.expect(ratio <= 0.10, "final/initial loss " + fmt(ratio, 4) + " > 0.10");
  c.expect(elapsed < 30.0, "training took " + fmt(elapsed, 1) + " s");

  // Central finite differences on a random 10-term model.
  testing::Gen gen(2024);
  std::vector<CooccurrenceEntry> entries;
  const auto terms = testing::term_pool(10);
  for (std::uint32_t i = 0; i < 10; ++i)
    for (std::uint32_t j = i + 1; j < 10; ++j)
      if (gen.coin(0.6)) entries.push_back({i, j, static_cast<double>(gen.between(1, 40))});
  const CooccurrenceMatrix small(terms, entries);
  EmbeddingModel m = init_model(terms, 4, 1);
  for (auto* v : {&m.word, &m.context, &m.word_bias, &m.context_bias})
    for (double& p : *v) p = gen.uniform(-0.5, 0.5);
  const WeightingConfig cfg;
  const EmbeddingGradient g = loss_gradient(m, small, cfg);
  double worst = 0.0;
  const std::pair<std::vector<double>*, const std::vector<double>*> blocks[] = {
      {&m.word, &g.word}, {&m.context, &g.context},
      {&m.word_bias, &g.word_bias}, {&m.context_bias, &g.context_bias}};
  for (auto [params, analytic] : blocks) {
    for (std::size_t k = 0; k < params->size(); ++k) {
      const double saved = (*params)[k];
      (*params)[k] = saved + 1e-5;
      const double up = loss(m, small, cfg);
      (*params)[k] = saved - 1e-5;
      const double down = loss(m, small, cfg);
      (*params)[k] = saved;
      const double numeric = (up - down) / 2e-5;
      const double scale = std::max(std::abs(numeric), std::abs((*analytic)[k]));
      if (scale > 0.0) worst = std::max(worst, std::abs(numeric - (*analytic)[k]) / scale);
    }
  }
  c.expect(worst <= 1e-5, "gradient relative error " + sci(worst) + " > 1e-5");
  return c.outcome("loss ratio " + sci(ratio) + " after 200 iterations in " + fmt(elapsed, 2) +
                   " s; worst gradient relative error " + sci(worst));
}

Outcome oracle_equivalence() {
  Checks c;
  testing::Gen gen(4);

  // Co-occurrence on 100 synthetic papers.
  Corpus corpus;
  corpus.records = gen.papers(100, testing::term_pool(30), 8);
  const Vocabulary vocab = build_vocabulary(corpus, 1);
  const CooccurrenceMatrix m = build_matrix(corpus, vocab);
  const auto expected = oracle::cooccurrence(corpus.records, vocab.terms());
  bool same = m.pair_count() == expected.size();
  for (const auto& [pair, w] : expected) same = same && m.weight(pair.first, pair.second) == w;
  c.expect(same, "co-occurrence differs from brute-force recount");

  // Betweenness on every directed graph with at most 5 nodes.
  std::size_t graphs = 0, mismatched = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    const std::uint64_t count = std::uint64_t{1} << (n * (n - 1));
    for (std::uint64_t mask = 0; mask < count; ++mask, ++graphs) {
      const auto edges = testing::graph_from_mask(n, mask);
      const auto got = betweenness(Digraph(n, edges));
      const auto want = oracle::betweenness(n, edges);
      for (std::size_t v = 0; v < n; ++v) {
        if (std::abs(got[v] - want[v]) > 1e-9) {
          ++mismatched;
          break;
        }
      }
    }
  }
  c.expect(mismatched == 0, std::to_string(mismatched) + " graphs with betweenness mismatch");

  // PageRank and HITS against dense power iteration.
  double pr_err = 0.0, hits_err = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 5 + gen.index(2);
    const auto edges = gen.edges(n, gen.uniform(0.1, 0.7));
    const Digraph g(n, edges);
    const auto pr = pagerank(g);
    const auto pr_want = oracle::pagerank(n, edges);
    for (std::size_t v = 0; v < n; ++v) pr_err = std::max(pr_err, std::abs(pr[v] - pr_want[v]));
    if (edges.empty()) continue;
    const HitsScores h = hits(g);
    const auto [hub, auth] = oracle::hits(n, edges, 100);
    for (std::size_t v = 0; v < n; ++v) {
      hits_err = std::max({hits_err, std::abs(h.hub[v] - hub[v]), std::abs(h.authority[v] - auth[v])});
    }
  }
  c.expect(pr_err <= 1e-8, "PageRank error " + sci(pr_err));
  c.expect(hits_err <= 1e-8, "HITS error " + sci(hits_err));

  // Fuzzy vocabulary matching at 0.35.
  const std::vector<std::string> forests{"random_forests"};
  const std::vector<std::string> sitting{"sitting"};
  const double d1 = normalized_levenshtein("random_forest", "random_forests");
  const double d2 = normalized_levenshtein("kitten", "sitting");
  c.expect(std::abs(d1 - 0.0714) < 5e-5, "random_forest distance " + fmt(d1));
  c.expect(std::abs(d2 - 0.4286) < 5e-5, "kitten distance " + fmt(d2));
  c.expect(match_to_vocabulary("random_forest", forests, 0.35) == "random_forests",
           "random_forest not matched");
  c.expect(!match_to_vocabulary("kitten", sitting, 0.35), "kitten wrongly matched");
  return c.outcome("co-occurrence exact; betweenness exact on " + std::to_string(graphs) +
                   " graphs; PageRank err " + sci(pr_err) + ", HITS err " + sci(hits_err) + "; Levenshtein " + fmt(d1) + " accepted, " +
                   fmt(d2) + " rejected");
}

Outcome end_to_end_fixture() {
  Checks c;
  const auto start = Clock::now();
  std::vector<std::size_t> ranks;
  for (std::size_t variant = 0; variant < 5; ++variant) {
    const fs::path dir = scratch("e2e_" + std::to_string(variant));
    const auto fx = fixture::make_fixture({.seed = 7 + variant, .variant = variant});
    fixture::write_fixture(fx, dir);
    PipelineConfig cfg = config_in(dir);
    run_pipeline(cfg);
    for (std::size_t p = 0; p < fx.problems.size(); ++p) {
      cfg.title = fx.query_for(p);
      std::ostringstream out;
      run_command("recommend", cfg, out);
      const json doc = json::parse(out.str());
      std::size_t rank = 0;
      for (std::size_t k = 0; k < doc["recommendations"].size(); ++k) {
        if (doc["recommendations"][k]["algorithm"] == fx.paired_algorithm[p]) rank = k + 1;
      }
      c.expect(rank == 1, "variant " + std::to_string(variant) + " '" + cfg.title + "': " +
                              fx.paired_algorithm[p] + " at rank " + std::to_string(rank));
      ranks.push_back(rank == 0 ? 1000 : rank);
    }
    fs::remove_all(dir);
  }
  const double value = mrr(ranks);
  const double elapsed = seconds_since(start);
  c.expect(value == 1.0, "MRR " + fmt(value));
  c.expect(elapsed < 60.0, "took " + fmt(elapsed, 1) + " s");
  return c.outcome("5 corpora x 5 problems, MRR " + fmt(value, 3) + " in " + fmt(elapsed, 1) + " s");
}

Outcome metric_oracles() {
  Checks c;
  const double m = mrr(std::vector<std::size_t>{2, 4});
  const double r = relative_maximal_accuracy(0.72, 0.9);
  c.expect(m == 0.375, "MRR([2,4]) = " + std::to_string(m));
  c.expect(r == 80.0, "relative(0.72, 0.9) = " + std::to_string(r));
  testing::Gen gen(6);
  std::size_t violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t algs = 2 + gen.index(6), datasets = 1 + gen.index(8);
    std::vector<ImplementationRow> rows;
    std::vector<std::string> impls, names, alg_names;
    for (std::size_t a = 0; a < algs; ++a) {
      alg_names.push_back("alg" + std::to_string(a));
      impls.push_back("impl" + std::to_string(a));
      rows.push_back({impls.back(), alg_names.back(), "fam"});
    }
    std::vector<std::optional<double>> cells;
    for (std::size_t d = 0; d < datasets; ++d) {
      names.push_back("d" + std::to_string(d));
      for (std::size_t k = 0; k < algs; ++k) {
        cells.push_back(k == 0 || gen.coin(0.7) ? std::optional<double>(gen.uniform(0.05, 1.0))
                                                : std::nullopt);
      }
    }
    const AccuracyMatrix matrix(names, impls, cells);
    const ImplementationMap map(rows);
    std::vector<std::vector<std::string>> recs;
    for (std::size_t d = 0; d < datasets; ++d) {
      auto order = alg_names;
      std::shuffle(order.begin(), order.end(), gen.engine());
      order.resize(1 + gen.index(order.size()));
      recs.push_back(order);
    }
    const auto curve = top_k_curve(recs, names, matrix, map, algs + 2);
    for (std::size_t k = 1; k < curve.size(); ++k) {
      if (curve[k].mean_relative_accuracy < curve[k - 1].mean_relative_accuracy) ++violations;
    }
  }
  c.expect(violations == 0, std::to_string(violations) + " top-k monotonicity violations");
  return c.outcome("MRR([2,4]) = " + fmt(m, 3) + ", relative(0.72, 0.9) = " + fmt(r, 1) + ", top-k monotone on 100 random instances");
}

Outcome determinism() {
  Checks c;
  const auto fx = fixture::make_fixture();
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  fixture::write_fixture(fx, a);
  fixture::write_fixture(fx, b);
  const PipelineConfig ca = config_in(a), cb = config_in(b);
  run_pipeline(ca);
  run_pipeline(cb);
  const std::vector<std::pair<fs::path, fs::path>> files{
      {ca.vocab, cb.vocab},
      {ca.vectors, cb.vectors},
      {ca.kb_algorithms, cb.kb_algorithms},
      {ca.kb_problems, cb.kb_problems},
      {ca.report, cb.report}};
  for (const auto& [x, y] : files) {
    c.expect(io::read_file(x) == io::read_file(y), x.filename().string() + " differs");
  }
  fs::remove_all(a);
  fs::remove_all(b);
  return c.outcome("vocab.tsv, vectors.tsv, kb_algorithms.tsv, kb_problems.tsv, report.json identical");
}

Outcome service_contract() {
  Checks c;
  const fs::path dir = scratch("service");
  const auto fx = fixture::make_fixture();
  fixture::write_fixture(fx, dir);
  const PipelineConfig cfg = config_in(dir);
  std::ostringstream sink;
  for (auto cmd : {"ingest", "cooccur", "train", "build-kb"}) run_command(cmd, cfg, sink);

  RecommendationService service(
      read_vectors_file(cfg.vectors),
      KnowledgeBase{read_kb_file(cfg.kb_algorithms), read_kb_file(cfg.kb_problems)});
  std::mutex mu;
  std::condition_variable cv;
  int port = -1;
  std::jthread server([&] {
    try {
      service.serve("127.0.0.1", 0, [&](int bound) {
        std::lock_guard lock(mu);
        port = bound;
        cv.notify_all();
      });
    } catch (const std::exception&) {
      std::lock_guard lock(mu);
      port = 0;
      cv.notify_all();
    }
  });
  {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return port != -1; });
  }
  if (port <= 0) {
    c.expect(false, "server failed to bind");
    return c.outcome("");
  }
  httplib::Client client("127.0.0.1", port);
  const json query{{"title", fx.query_for(0)}, {"description", ""}};
  const auto ok = client.Post("/recommend", query.dump(), "application/json");
  const auto bad = client.Post("/recommend", "{\"title\": ", "application/json");
  const auto none = client.Post("/recommend", R"({"title":"weather forecast"})", "application/json");
  const auto health = client.Get("/health");
  service.stop();
  server.join();

  std::string top1;
  if (ok && ok->status == 200) top1 = json::parse(ok->body)["recommendations"][0]["algorithm"];
  c.expect(ok && ok->status == 200, "well-formed query did not return 200");
  c.expect(top1 == fx.paired_algorithm[0], "top-1 '" + top1 + "' != " + fx.paired_algorithm[0]);
  c.expect(bad && bad->status == 400, "malformed JSON did not return 400");
  c.expect(none && none->status == 422, "unmatched query did not return 422");
  c.expect(health && health->status == 200, "health check failed");
  fs::remove_all(dir);
  return c.outcome("200 with top-1 " + top1 + ", 400 for malformed JSON, 422 for no match (port " +
                   std::to_string(port) + ")");
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 published headline numbers", headline_targets},
      {"AC2 random_forest baseline on the published matrix", baseline_reproduction},
      {"AC3 embedding numerics", embedding_numerics},
      {"AC4 oracle equivalence", oracle_equivalence},
      {"AC5 end-to-end fixture", end_to_end_fixture},
      {"AC6 metric unit oracles", metric_oracles},
      {"AC7 determinism", determinism},
      {"AC8 service contract", service_contract},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    std::printf("%s  %s: %s\n", tag, name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.status == Status::kFail;
  }
  return failed == 0 ? 0 : 1;
}
