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

#include "generators.hpp"
#include "sommelier/error.hpp"
#include "sommelier/recommender.hpp"

namespace sommelier {
namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no sommelier::Error thrown";
  return ErrorKind::kIo;
}

KbTerm mapped(std::string term) { return {term, 1.0, term}; }

// 3-d store: two algorithms, a problem term, a plain vocabulary term and a
// keyword orthogonal to both algorithms.
struct Toy {
  VectorStore vectors{{"a1", "a2", "ortho", "regression", "speech_recognition"},
                      3,
                      {1, 0, 0,   // a1
                       0, 1, 0,   // a2
                       0, 0, 1,   // ortho
                       1, 1, 0,   // regression
                       0.9, std::sqrt(1 - 0.81), 0}};
  KnowledgeBase kb{{mapped("a1"), mapped("a2"), {"unmapped_alg", 0.5, std::nullopt}},
                   {mapped("speech_recognition"), {"lost_problem", 1.0, std::nullopt}}};
};

TEST(ExtractTerms, UnigramsThenBigrams) {
  EXPECT_EQ(extract_terms("speech recognition task", ""),
            (std::vector<std::string>{"speech", "recognition", "task", "speech_recognition",
                                      "recognition_task"}));
  EXPECT_EQ(extract_terms("Adult", ""), (std::vector<std::string>{"adult"}));
  EXPECT_EQ(extract_terms("spam spam", "spam spam"),
            (std::vector<std::string>{"spam", "spam_spam"}));
  EXPECT_EQ(extract_terms("", "Credit-Card fraud"),
            (std::vector<std::string>{"credit", "card", "fraud", "credit_card", "card_fraud"}));
  EXPECT_EQ(kind_of([] { extract_terms("", " ,. "); }), ErrorKind::kInput);
}

TEST(Recommender, RequiresAMappedAlgorithm) {
  const Toy toy;
  const KnowledgeBase empty{{{"x", 1.0, std::nullopt}}, {}};
  EXPECT_EQ(kind_of([&] { Recommender(toy.vectors, empty); }), ErrorKind::kConfig);
  const Recommender r(toy.vectors, toy.kb);
  EXPECT_EQ(r.algorithm_count(), 2u);
}

TEST(Recommender, ProblemBranchFallbackAndNoMatch) {
  const Toy toy;
  const Recommender r(toy.vectors, toy.kb);
  const auto p = r.match_keywords({"speech", "speech_recognition", "regression"});
  EXPECT_EQ(p.terms, (std::vector<std::string>{"speech_recognition"}));
  EXPECT_FALSE(p.fallback_used());
  const auto f = r.match_keywords({"house", "regression"});
  EXPECT_EQ(f.terms, (std::vector<std::string>{"regression"}));
  EXPECT_TRUE(f.fallback_used());
  try {
    r.match_keywords({"weather"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoMatch);
    EXPECT_STREQ(e.what(), "no keywords matched");
  }
}

TEST(Recommender, BranchExclusivityOnRandomCandidateLists) {
  const Toy toy;
  const Recommender r(toy.vectors, toy.kb);
  testing::Gen gen(401);
  const std::vector<std::string> pool{"a1", "ortho", "regression", "speech_recognition", "zz", "yy"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> c;
    for (std::size_t k = 0, n = 1 + gen.index(5); k < n; ++k) c.push_back(pool[gen.index(pool.size())]);
    const bool has_problem = std::count(c.begin(), c.end(), "speech_recognition") > 0;
    const bool has_vocab = std::any_of(c.begin(), c.end(), [&](const auto& t) { return toy.vectors.contains(t); });
    if (!has_vocab) {
      EXPECT_EQ(kind_of([&] { r.match_keywords(c); }), ErrorKind::kNoMatch);
      continue;
    }
    const auto m = r.match_keywords(c);
    EXPECT_EQ(m.fallback_used(), !has_problem);
    if (has_problem) {
      for (const auto& t : m.terms) EXPECT_EQ(t, "speech_recognition");
    }
  }
}

TEST(Recommender, SingleKeywordScoresAreCosines) {
  const Toy toy;
  const Recommender r(toy.vectors, toy.kb);
  const auto list = r.recommend("speech recognition", "");
  ASSERT_EQ(list.entries.size(), 2u);
  EXPECT_EQ(list.entries[0].algorithm, "a1");
  EXPECT_NEAR(list.entries[0].score, 0.9, 1e-12);
  EXPECT_EQ(list.entries[1].algorithm, "a2");
  EXPECT_NEAR(list.entries[1].score, std::sqrt(0.19), 1e-12);
  EXPECT_EQ(r.recommend("speech recognition", "", 1).entries.size(), 1u);
  EXPECT_EQ(r.recommend("speech recognition", "", 99).entries.size(), 2u);
  EXPECT_EQ(kind_of([&] { r.recommend("speech recognition", "", 0); }), ErrorKind::kConfig);
}

TEST(Recommender, TiedScoresOrderByName) {
  const VectorStore v({"a_alg", "b_alg", "kw"}, 2, {1, 0, 1, 0, 1, 1});
  const KnowledgeBase kb{{mapped("b_alg"), mapped("a_alg")}, {mapped("kw")}};
  const Recommender r(v, kb);
  const auto out = r.score_algorithms({{"kw"}, MatchSource::kProblems});
  EXPECT_EQ(out[0].algorithm, "a_alg");
  EXPECT_EQ(out[1].algorithm, "b_alg");
  EXPECT_EQ(out[0].score, out[1].score);
}

struct RandomStore {
  VectorStore vectors;
  KnowledgeBase kb;
};

RandomStore random_store(testing::Gen& gen, std::size_t n, std::size_t dim) {
  const auto terms = testing::term_pool(n);
  std::vector<double> values(n * dim);
  for (auto& x : values) x = gen.uniform(-1, 1);
  RandomStore s{VectorStore(terms, dim, values), {}};
  for (std::size_t k = 0; k < n; ++k) {
    if (k % 3 == 0) s.kb.algorithms.push_back(mapped(terms[k]));
    else if (k % 3 == 1) s.kb.problems.push_back(mapped(terms[k]));
  }
  return s;
}

TEST(Recommender, ScoresEqualNaiveDoubleLoop) {
  testing::Gen gen(403);
  for (int trial = 0; trial < 50; ++trial) {
    const RandomStore s = random_store(gen, 30, 5);
    const Recommender r(s.vectors, s.kb);
    MatchedKeywords d{{}, MatchSource::kProblems};
    for (const auto& p : s.kb.problems) if (gen.coin(0.4)) d.terms.push_back(p.term);
    if (d.terms.empty()) d.terms.push_back(s.kb.problems[0].term);
    for (const auto& e : r.score_algorithms(d)) {
      const auto w = *s.vectors.find(e.algorithm);
      long double total = 0;
      for (const auto& t : d.terms) {
        const auto v = *s.vectors.find(t);
        long double dot = 0, nw = 0, nv = 0;
        for (std::size_t k = 0; k < w.size(); ++k) {
          dot += (long double)w[k] * v[k];
          nw += (long double)w[k] * w[k];
          nv += (long double)v[k] * v[k];
        }
        total += dot / std::sqrt(nw * nv);
      }
      EXPECT_NEAR(e.score, static_cast<double>(total), 1e-12);
    }
  }
}

TEST(Recommender, OrthogonalKeywordLeavesScoresUnchanged) {
  const Toy toy;
  const Recommender r(toy.vectors, toy.kb);
  const auto base = r.score_algorithms({{"regression"}, MatchSource::kVocabulary});
  const auto more = r.score_algorithms({{"regression", "ortho"}, MatchSource::kVocabulary});
  ASSERT_EQ(base.size(), more.size());
  for (std::size_t k = 0; k < base.size(); ++k) {
    EXPECT_EQ(base[k].algorithm, more[k].algorithm);
    EXPECT_NEAR(base[k].score, more[k].score, 1e-15);
  }
}

TEST(Recommender, RankingInvariantUnderPositiveRescaling) {
  testing::Gen gen(405);
  for (int trial = 0; trial < 50; ++trial) {
    RandomStore s = random_store(gen, 24, 4);
    MatchedKeywords d{{s.kb.problems[0].term, s.kb.problems[1].term}, MatchSource::kProblems};
    std::vector<std::string> before;
    {
      const Recommender r(s.vectors, s.kb);
      for (const auto& e : r.score_algorithms(d)) before.push_back(e.algorithm);
    }
    for (std::size_t row = 0; row < s.vectors.size(); ++row) {
      if (gen.coin()) s.vectors.scale_row(row, gen.uniform(0.01, 100.0));
    }
    const Recommender r(s.vectors, s.kb);
    std::vector<std::string> after;
    for (const auto& e : r.score_algorithms(d)) after.push_back(e.algorithm);
    EXPECT_EQ(before, after);
  }
}

}  // namespace
}  // namespace sommelier
