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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "embedding_oracle.hpp"
#include "generators.hpp"
#include "sommelier/embedding.hpp"
#include "sommelier/error.hpp"

namespace sommelier {
namespace {

using PairMap = std::map<std::pair<std::string, std::string>, double>;

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no sommelier::Error thrown";
  return ErrorKind::kIo;
}

// Random symmetric co-occurrence matrix over `n` terms, returned with the
// same content as an ordered-pair map for the naive oracle.
std::pair<CooccurrenceMatrix, PairMap> random_matrix(testing::Gen& gen, std::size_t n,
                                                     double density) {
  const auto terms = testing::term_pool(n);
  std::vector<CooccurrenceEntry> entries;
  PairMap map;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (!gen.coin(density)) continue;
      const double x = static_cast<double>(gen.between(1, 40));
      entries.push_back({i, j, x});
      map[{terms[i], terms[j]}] = x;
    }
  }
  return {CooccurrenceMatrix(terms, std::move(entries)), std::move(map)};
}

// Model with O(1) parameters so finite differences are well conditioned.
EmbeddingModel random_model(testing::Gen& gen, std::size_t n, std::size_t dim) {
  EmbeddingModel m = init_model(testing::term_pool(n), dim, 1);
  for (auto* v : {&m.word, &m.context, &m.word_bias, &m.context_bias}) {
    for (double& x : *v) x = gen.uniform(-0.5, 0.5);
  }
  return m;
}

TEST(Weighting, MatchesClosedForm) {
  const WeightingConfig cfg;
  EXPECT_EQ(cooccurrence_weight(10.0, cfg), 1.0);
  EXPECT_EQ(cooccurrence_weight(20.0, cfg), 1.0);
  EXPECT_NEAR(cooccurrence_weight(5.0, cfg), 0.59460, 5e-6);
  EXPECT_NEAR(cooccurrence_weight(5.0, cfg), std::pow(0.5, 0.75), 1e-15);
  EXPECT_EQ(kind_of([&] { cooccurrence_weight(0.0, cfg); }), ErrorKind::kDomain);
  EXPECT_EQ(kind_of([&] { cooccurrence_weight(-1.0, cfg); }), ErrorKind::kDomain);
  EXPECT_EQ(kind_of([] { WeightingConfig{0.0, 10.0}.validate(); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { WeightingConfig{1.5, 10.0}.validate(); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { WeightingConfig{0.75, 0.0}.validate(); }), ErrorKind::kConfig);
}

TEST(Weighting, NondecreasingAndContinuousAtSaturation) {
  testing::Gen gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const WeightingConfig cfg{gen.uniform(0.05, 1.0), gen.uniform(0.5, 50.0)};
    double prev = 0.0;
    for (double x = 0.01; x < 3 * cfg.x_max; x *= 1.07) {
      const double f = cooccurrence_weight(x, cfg);
      EXPECT_GE(f, prev);
      EXPECT_GT(f, 0.0);
      EXPECT_LE(f, 1.0);
      prev = f;
    }
    EXPECT_NEAR(cooccurrence_weight(cfg.x_max * (1 - 1e-12), cfg), 1.0, 1e-9);
  }
}

TEST(InitModel, ShapeRangeAndDeterminism) {
  const EmbeddingModel m = init_model({"a", "b", "c"}, 2, 9);
  EXPECT_EQ(m.word.size() + m.context.size(), 12u);
  EXPECT_EQ(m.word_bias.size() + m.context_bias.size(), 6u);
  for (double x : m.word) {
    EXPECT_GE(x, -0.25);
    EXPECT_LE(x, 0.25);
  }
  for (double b : m.word_bias) EXPECT_EQ(b, 0.0);
  for (double g : m.word_grad_sq) EXPECT_EQ(g, kAccumulatorEpsilon);
  EXPECT_EQ(init_model({"a", "b", "c"}, 2, 9), m);
  EXPECT_NE(init_model({"a", "b", "c"}, 2, 10).word, m.word);
  EXPECT_EQ(init_model({"a"}, 200, 1).word_row(0).size(), 200u);
  EXPECT_EQ(kind_of([] { init_model({"a"}, 0, 1); }), ErrorKind::kConfig);
}

TEST(Loss, ZeroWhenResidualsVanish) {
  // Zero vectors with biases splitting log X evenly.
  EmbeddingModel m = init_model({"a", "b"}, 3, 1);
  std::fill(m.word.begin(), m.word.end(), 0.0);
  std::fill(m.context.begin(), m.context.end(), 0.0);
  const double half = std::log(7.0) / 2;
  m.word_bias = {half, half};
  m.context_bias = {half, half};
  const CooccurrenceMatrix x({"a", "b"}, {{0, 1, 7.0}});
  EXPECT_NEAR(loss(m, x, {}), 0.0, 1e-28);
}

TEST(Loss, SinglePairUnitResidualGivesTwo) {
  EmbeddingModel m = init_model({"a", "b"}, 2, 1);
  std::fill(m.word.begin(), m.word.end(), 0.0);
  std::fill(m.context.begin(), m.context.end(), 0.0);
  const double b = (std::log(10.0) + 1.0) / 2;
  m.word_bias = {b, b};
  m.context_bias = {b, b};
  const CooccurrenceMatrix x({"a", "b"}, {{0, 1, 10.0}});
  EXPECT_NEAR(loss(m, x, {}), 2.0, 1e-12);
}

TEST(Loss, MatchesNaiveSummationOnRandomModels) {
  testing::Gen gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto [x, map] = random_matrix(gen, 10, 0.5);
    const EmbeddingModel m = random_model(gen, 10, 1 + gen.index(8));
    const WeightingConfig cfg{gen.uniform(0.1, 1.0), gen.uniform(1.0, 30.0)};
    const double expected = oracle::naive_loss(m, map, cfg.alpha, cfg.x_max);
    const double got = loss(m, x, cfg);
    EXPECT_GE(got, 0.0);
    EXPECT_LE(std::abs(got - expected), 1e-10 * expected);
  }
}

TEST(Loss, RejectsVocabularyMismatch) {
  const EmbeddingModel m = init_model({"a", "b"}, 2, 1);
  const CooccurrenceMatrix x({"a", "c"}, {{0, 1, 1.0}});
  EXPECT_EQ(kind_of([&] { loss(m, x, {}); }), ErrorKind::kStructure);
}

// Central finite differences, step 1e-5, against every analytic partial.
TEST(LossGradient, MatchesCentralFiniteDifferences) {
  testing::Gen gen(13);
  constexpr double kStep = 1e-5;
  constexpr double kTolerance = 1e-5;
  for (int trial = 0; trial < 3; ++trial) {
    auto [x, map] = random_matrix(gen, 10, 0.6);
    EmbeddingModel m = random_model(gen, 10, 4);
    const WeightingConfig cfg;
    const EmbeddingGradient g = loss_gradient(m, x, cfg);
    const std::pair<std::vector<double>*, const std::vector<double>*> blocks[] = {
        {&m.word, &g.word},
        {&m.context, &g.context},
        {&m.word_bias, &g.word_bias},
        {&m.context_bias, &g.context_bias}};
    double worst = 0.0;
    for (auto [params, analytic] : blocks) {
      ASSERT_EQ(params->size(), analytic->size());
      for (std::size_t k = 0; k < params->size(); ++k) {
        const double saved = (*params)[k];
        (*params)[k] = saved + kStep;
        const double up = loss(m, x, cfg);
        (*params)[k] = saved - kStep;
        const double down = loss(m, x, cfg);
        (*params)[k] = saved;
        const double numeric = (up - down) / (2 * kStep);
        const double a = (*analytic)[k];
        const double scale = std::max(std::abs(a), std::abs(numeric));
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(a - numeric) / scale);
      }
    }
    EXPECT_LE(worst, kTolerance) << "trial " << trial;
  }
}

TEST(Train, LowersLossAndRecordsTrajectory) {
  testing::Gen gen(19);
  auto [x, map] = random_matrix(gen, 12, 0.5);
  EmbeddingModel m = init_model(x.terms(), 8, 4);
  const TrainingReport r = train(m, x, {}, {.iterations = 30});
  EXPECT_EQ(r.iterations, 30u);
  ASSERT_EQ(r.losses.size(), 30u);
  EXPECT_LT(r.final_loss(), r.initial_loss);
  for (double j : r.losses) EXPECT_GE(j, 0.0);
  EXPECT_NEAR(r.final_loss(), loss(m, x, {}), 1e-9 * r.final_loss());
  EXPECT_EQ(m.iterations_done, 30u);
}

TEST(Train, RejectsBadOptions) {
  const CooccurrenceMatrix x({"a", "b"}, {{0, 1, 3.0}});
  EmbeddingModel m = init_model(x.terms(), 2, 1);
  EXPECT_EQ(kind_of([&] { train(m, x, {}, {.iterations = 0}); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([&] { train(m, x, {}, {.iterations = 1, .learning_rate = 0.0}); }),
            ErrorKind::kConfig);
}

TEST(Train, NonFiniteResidualNamesThePair) {
  const CooccurrenceMatrix x({"a", "b"}, {{0, 1, 3.0}});
  EmbeddingModel m = init_model(x.terms(), 2, 1);
  m.word[0] = std::numeric_limits<double>::infinity();
  try {
    train(m, x, {}, {.iterations = 1});
    FAIL() << "expected a training error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTraining);
    EXPECT_NE(std::string(e.what()).find("pair (a, b)"), std::string::npos);
  }
}

TEST(Train, SequentialRunsAreBitIdentical) {
  testing::Gen gen(21);
  auto [x, map] = random_matrix(gen, 15, 0.4);
  EmbeddingModel a = init_model(x.terms(), 6, 77);
  EmbeddingModel b = init_model(x.terms(), 6, 77);
  train(a, x, {}, {.iterations = 10});
  train(b, x, {}, {.iterations = 10});
  EXPECT_EQ(a, b);
  EXPECT_EQ(export_vectors(a), export_vectors(b));
}

TEST(Train, MultiThreadedTrainingStillConverges) {
  testing::Gen gen(22);
  auto [x, map] = random_matrix(gen, 30, 0.4);
  EmbeddingModel m = init_model(x.terms(), 8, 5);
  const TrainingReport r = train(m, x, {}, {.iterations = 20, .threads = 4});
  EXPECT_LT(r.final_loss(), r.initial_loss);
}

TEST(Checkpoint, ResumeMatchesUninterruptedTraining) {
  testing::Gen gen(31);
  auto [x, map] = random_matrix(gen, 10, 0.5);
  EmbeddingModel whole = init_model(x.terms(), 5, 8);
  train(whole, x, {}, {.iterations = 6});

  EmbeddingModel first = init_model(x.terms(), 5, 8);
  train(first, x, {}, {.iterations = 3});
  const auto dir = std::filesystem::temp_directory_path() / "sommelier_checkpoint_test";
  std::filesystem::remove_all(dir);
  save_checkpoint(dir, first, {0.6, 12.0});
  Checkpoint cp = load_checkpoint(dir);
  EXPECT_EQ(cp.model, first);
  EXPECT_EQ(cp.config.alpha, 0.6);
  EXPECT_EQ(cp.config.x_max, 12.0);
  train(cp.model, x, {}, {.iterations = 3});
  EXPECT_EQ(cp.model, whole);
  std::filesystem::remove_all(dir);
}

TEST(ExportVectors, SumsWordAndContext) {
  EmbeddingModel m = init_model({"a"}, 2, 1);
  m.word = {1.0, 0.0};
  m.context = {0.0, 1.0};
  const VectorStore v = export_vectors(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.vector(0)[0], 1.0);
  EXPECT_EQ(v.vector(0)[1], 1.0);
}

TEST(VectorsTsv, RoundTripsBitExactly) {
  testing::Gen gen(37);
  auto [x, map] = random_matrix(gen, 20, 0.3);
  EmbeddingModel m = init_model(x.terms(), 7, 2);
  train(m, x, {}, {.iterations = 3});
  const VectorStore v = export_vectors(m);
  EXPECT_EQ(v.size(), 20u);
  std::ostringstream out;
  write_vectors_tsv(out, v);
  std::istringstream in(out.str());
  EXPECT_EQ(read_vectors_tsv(in), v);
}

TEST(VectorsTsv, RejectsRaggedRows) {
  std::istringstream in("a\t1 2\nb\t1\n");
  EXPECT_THROW(read_vectors_tsv(in), Error);
}

TEST(Cosine, KnownValues) {
  const std::vector<double> e1{1, 0}, e2{0, 1}, d{1, 1}, z{0, 0};
  EXPECT_NEAR(cosine(e1, e1), 1.0, 1e-15);
  EXPECT_EQ(cosine(e1, e2), 0.0);
  EXPECT_NEAR(cosine(e1, d), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(cosine(e1, d), 0.70711, 5e-6);
  EXPECT_EQ(kind_of([&] { cosine(e1, z); }), ErrorKind::kDomain);
  EXPECT_EQ(kind_of([&] { cosine(e1, std::vector<double>{1, 2, 3}); }), ErrorKind::kDomain);
}

TEST(Cosine, SymmetricBoundedAndScaleInvariant) {
  testing::Gen gen(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + gen.index(10);
    std::vector<double> u(n), v(n);
    for (auto& x : u) x = gen.uniform(-3, 3);
    for (auto& x : v) x = gen.uniform(-3, 3);
    const double c = cosine(u, v);
    EXPECT_EQ(c, cosine(v, u));
    EXPECT_LE(std::abs(c), 1.0 + 1e-15);
    const double s = gen.uniform(1e-3, 1e3);
    std::vector<double> su = u;
    for (auto& x : su) x *= s;
    EXPECT_NEAR(cosine(su, v), c, 1e-12);
  }
}

}  // namespace
}  // namespace sommelier
