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

#include "sommelier/fixture.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <random>
#include <span>
#include <sstream>

#include <json.hpp>

#include "sommelier/io.hpp"

namespace sommelier::fixture {
namespace {

using nlohmann::json;

struct Named {
  const char* term;
  const char* title;
};

constexpr std::array<Named, 5> kAlgorithms{{
    {"hidden_markov_model", "Hidden Markov model"},
    {"convolutional_neural_network", "Convolutional neural network"},
    {"random_forest", "Random forest"},
    {"naive_bayes", "Naive Bayes"},
    {"logistic_regression", "Logistic regression"},
}};

constexpr std::array<Named, 5> kProblems{{
    {"speech_recognition", "Speech recognition"},
    {"image_classification", "Image classification"},
    {"fraud_detection", "Fraud detection"},
    {"spam_filtering", "Spam filtering"},
    {"credit_scoring", "Credit scoring"},
}};

constexpr std::array<std::array<const char*, 8>, 5> kFillers{{
    {"acoustic_model", "phoneme", "spectrogram", "mel_frequency", "speaker_adaptation",
     "language_model", "audio_features", "utterance"},
    {"pixel_features", "convolution_filter", "image_augmentation", "object_localization",
     "feature_map", "pooling_layer", "color_histogram", "edge_detector"},
    {"transaction_data", "card_payment", "outlier_score", "class_imbalance", "merchant_risk",
     "chargeback", "behavioral_profile", "alert_triage"},
    {"email_header", "bag_of_words", "token_frequency", "sender_reputation", "phishing",
     "message_body", "word_counts", "blacklist"},
    {"loan_default", "credit_history", "income_level", "risk_score", "scorecard",
     "applicant_data", "repayment", "default_probability"},
}};

constexpr std::array<const char*, 5> kDatasetTitles{
    "Spoken digits", "Handwritten glyphs", "Card transactions", "Mailbox", "German lenders"};

constexpr std::array<const char*, 5> kFamilies{
    "probabilistic_models", "neural_networks", "random_forests", "probabilistic_models",
    "generalized_linear_models"};

constexpr std::array<const char*, 20> kPlaceWords{
    "harbor", "castle", "valley", "cathedral", "meadow", "lighthouse", "orchard", "canal",
    "monastery", "glacier", "bazaar", "aqueduct", "vineyard", "fortress", "lagoon", "quarry",
    "pavilion", "granary", "bastion", "estuary"};

constexpr std::array<const char*, 12> kPlaceQualifiers{
    "old", "northern", "royal", "upper", "eastern", "lower", "grand", "western", "little",
    "southern", "high", "new"};

constexpr std::array<const char*, 24> kPlainWords{
    "built",   "century", "river",   "stone",  "village", "trade",   "festival", "bridge",
    "market",  "wooden",  "tower",   "region", "ancient", "walls",   "harvest",  "road",
    "merchants", "church", "coast",  "hills",  "garden",  "museum",  "ruins",    "square"};

constexpr std::array<const char*, 16> kMethodWords{
    "supervised", "learning", "model", "training", "labeled", "examples", "classifier",
    "probability", "features", "parameters", "prediction", "statistical", "method",
    "inference", "estimation", "algorithm"};

constexpr std::array<const char*, 12> kTaskWords{
    "task", "benchmark", "dataset", "application", "evaluation", "accuracy", "input",
    "output", "errors", "systems", "practical", "problem"};

// Modulo draws keep the generated files identical across standard libraries.
std::size_t draw(std::mt19937_64& rng, std::size_t n) { return rng() % n; }

// Varies spelling so ingestion has to normalize: "Random Forest", "random-forest".
std::string surface_form(const std::string& term, std::mt19937_64& rng) {
  std::string out = term;
  switch (draw(rng, 4)) {
    case 0:
      return out;
    case 1:
      std::replace(out.begin(), out.end(), '_', ' ');
      return out;
    case 2:
      std::replace(out.begin(), out.end(), '_', '-');
      return out;
    default: {
      bool start = true;
      for (char& c : out) {
        if (c == '_') {
          c = ' ';
          start = true;
        } else if (start) {
          c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
          start = false;
        }
      }
      return out;
    }
  }
}

std::string sentence(std::mt19937_64& rng, std::span<const char* const> words, std::size_t n) {
  std::string out;
  for (std::size_t k = 0; k < n; ++k) {
    if (k) out += ' ';
    out += words[draw(rng, words.size())];
  }
  return out;
}

std::string title_case(std::string text) {
  if (!text.empty()) text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  return text;
}

json page(const std::string& title, const std::string& text,
          const std::vector<std::string>& categories, const std::vector<std::string>& links) {
  return {{"title", title}, {"text", text}, {"categories", categories}, {"links", links}};
}

}  // namespace

std::string Fixture::query_for(std::size_t problem) const {
  std::string words = problems.at(problem);
  std::replace(words.begin(), words.end(), '_', ' ');
  return words + " dataset";
}

Fixture make_fixture(const FixtureOptions& options) {
  std::mt19937_64 rng(options.seed * 1000003u + options.variant);
  Fixture fx;
  for (const auto& a : kAlgorithms) fx.algorithms.push_back(a.term);
  for (const auto& p : kProblems) fx.problems.push_back(p.term);
  for (const auto& group : kFillers) fx.fillers.insert(fx.fillers.end(), group.begin(), group.end());

  // Variant v rotates the pairing by v: problem i goes with algorithm i + v.
  std::vector<std::size_t> pairing(kProblems.size());
  for (std::size_t i = 0; i < pairing.size(); ++i) {
    pairing[i] = (i + options.variant) % kAlgorithms.size();
    fx.paired_algorithm.push_back(kAlgorithms[pairing[i]].term);
  }

  std::ostringstream papers;
  std::size_t paper_id = 0;
  auto emit_paper = [&](std::vector<std::string> keywords, int year, bool split_journal) {
    json record{{"id", "P" + std::to_string(paper_id++)}, {"year", year}};
    std::vector<std::string> author, journal;
    for (std::size_t k = 0; k < keywords.size(); ++k) {
      std::string form = surface_form(keywords[k], rng);
      (split_journal && k % 2 == 1 ? journal : author).push_back(std::move(form));
    }
    record["keywords"] = author;
    if (!journal.empty()) record["journal_keywords"] = journal;
    papers << record.dump() << '\n';
  };

  for (std::size_t i = 0; i < kProblems.size(); ++i) {
    for (std::size_t n = 0; n < options.papers_per_pair; ++n) {
      std::vector<std::string> keywords{kProblems[i].term, kAlgorithms[pairing[i]].term};
      const std::size_t extra = 1 + draw(rng, 2);
      for (std::size_t k = 0; k < extra; ++k) keywords.push_back(kFillers[i][draw(rng, 8)]);
      if (n % 7 == 0) keywords.push_back(kProblems[i].term);  // duplicate, dropped on ingest
      emit_paper(keywords, 2012 + static_cast<int>(draw(rng, 9)), n % 3 == 0);
    }
  }
  for (std::size_t b = 0; b < options.background_papers; ++b) {
    std::vector<std::string> keywords{fx.fillers[b % fx.fillers.size()]};
    keywords.push_back(fx.fillers[draw(rng, fx.fillers.size())]);
    keywords.push_back(fx.fillers[draw(rng, fx.fillers.size())]);
    if (b % 5 == 0) keywords.push_back(kAlgorithms[draw(rng, kAlgorithms.size())].term);
    if (b % 40 == 0) keywords.push_back("rare_topic_" + std::to_string(b));
    emit_paper(keywords, 1985 + static_cast<int>(draw(rng, 26)), false);
  }
  // Records that ingestion drops or rejects.
  papers << R"({"id":"empty","keywords":["  ", "--"],"year":2010})" << '\n';
  papers << R"({"id":"noyear","keywords":["phoneme"]})" << '\n';
  fx.papers_jsonl = papers.str();

  // Page graph: seeds, a few candidate pages and unrelated pages.
  std::vector<std::string> other_titles;
  for (std::size_t n = 0; other_titles.size() < options.other_pages; ++n) {
    std::string title = title_case(std::string(kPlaceQualifiers[n % kPlaceQualifiers.size()]) +
                                   " " + kPlaceWords[(n / kPlaceQualifiers.size() + n) %
                                                     kPlaceWords.size()]);
    if (std::find(other_titles.begin(), other_titles.end(), title) == other_titles.end()) {
      other_titles.push_back(title);
    }
  }
  const std::vector<std::pair<std::string, std::string>> candidates{
      {"Ensemble learning", "combines several models such as boosting and bagging"},
      {"Pattern recognition", "assigns labels to observations using a trained model"},
      {"Anomaly detection", "finds rare observations that differ from the majority"},
      {"Kernel smoothing", "a support vector machine style kernel weights nearby points"},
      {"Handwriting recognition", "reads handwritten text from images"},
      {"Bayesian networks", "graphical models of conditional dependence"},
  };

  std::ostringstream pages;
  auto other_link = [&] { return other_titles[draw(rng, other_titles.size())]; };
  for (std::size_t a = 0; a < kAlgorithms.size(); ++a) {
    const std::size_t problem =
        static_cast<std::size_t>(std::find(pairing.begin(), pairing.end(), a) - pairing.begin());
    std::vector<std::string> links{kProblems[problem].title, candidates[a].first, other_link()};
    const std::string text = std::string(kAlgorithms[a].title) + " is a " +
                             sentence(rng, kMethodWords, 14) + " used in " +
                             kProblems[problem].title + ". " + sentence(rng, kMethodWords, 10);
    pages << page(kAlgorithms[a].title, text, {"Classification algorithms", "Statistical models"},
                  links)
                 .dump()
          << '\n';
  }
  for (std::size_t p = 0; p < kProblems.size(); ++p) {
    std::vector<std::string> links{kAlgorithms[pairing[p]].title, other_link()};
    const std::string text = std::string(kProblems[p].title) + " is a " +
                             sentence(rng, kTaskWords, 14) + ". " + sentence(rng, kTaskWords, 10);
    pages << page(kProblems[p].title, text, {"Applications of artificial intelligence"}, links)
                 .dump()
          << '\n';
  }
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const std::string text = candidates[c].first + " " + candidates[c].second + ". " +
                             sentence(rng,
                                      c % 2 ? std::span<const char* const>(kTaskWords)
                                            : std::span<const char* const>(kMethodWords),
                                      12);
    pages << page(candidates[c].first, text, {"Machine learning"},
                  {kAlgorithms[c % kAlgorithms.size()].title, other_link()})
                 .dump()
          << '\n';
  }
  for (std::size_t o = 0; o < other_titles.size(); ++o) {
    std::vector<std::string> links{other_link(), other_link()};
    if (o % 6 == 0) links.push_back("Lost chronicle " + std::to_string(o));  // stub
    pages << page(other_titles[o], other_titles[o] + " " + sentence(rng, kPlainWords, 20),
                  {"Places"}, links)
                 .dump()
          << '\n';
  }
  fx.pages_jsonl = pages.str();

  json seeds{{"algorithm_categories", {"Classification algorithms"}},
             {"algorithm_extra_titles", json::array()},
             {"problem_titles", json::array()}};
  for (const auto& p : kProblems) seeds["problem_titles"].push_back(p.title);
  fx.seeds_json = seeds.dump(2) + "\n";

  fx.overrides_tsv =
      "# term\taction\tclass\n"
      "ensemble_learning\tremove\talgorithm\n"
      // Within edit distance 0.35 of speech_recognition; review drops it.
      "pattern_recognition\tremove\talgorithm\n"
      "anomaly_detection\tadd\tproblem\n";

  // Two implementations per algorithm; on the first three datasets the paired
  // algorithm is best, on the last two a different one wins.
  std::vector<std::string> implementations;
  std::ostringstream impl_map;
  for (std::size_t a = 0; a < kAlgorithms.size(); ++a) {
    for (const char* suffix : {"_v1", "_v2"}) {
      const std::string impl = std::string(kAlgorithms[a].term) + suffix;
      implementations.push_back(impl);
      impl_map << impl << '\t' << kAlgorithms[a].term << '\t' << kFamilies[a] << '\n';
    }
  }
  fx.impl_map_tsv = impl_map.str();

  std::ostringstream accuracy, datasets;
  accuracy << "dataset";
  for (const auto& impl : implementations) accuracy << ',' << impl;
  accuracy << '\n';
  for (std::size_t d = 0; d < kProblems.size(); ++d) {
    const std::string name = "ds_" + std::string(kProblems[d].term);
    const std::size_t winner = d < 3 ? pairing[d] : (pairing[d] + 2) % kAlgorithms.size();
    accuracy << name;
    for (std::size_t k = 0; k < implementations.size(); ++k) {
      const std::size_t a = k / 2;
      if (d == 1 && k == 9) {  // one "not evaluated" cell
        accuracy << ',';
        continue;
      }
      // Whole percentages, so the CSV holds short decimals.
      double value = static_cast<double>(60 + draw(rng, 25)) / 100.0;
      if (a == winner) value = k % 2 == 0 ? 0.95 : 0.90;
      accuracy << ',' << io::format_double(value);
    }
    accuracy << '\n';
    std::string words = kProblems[d].term;
    std::replace(words.begin(), words.end(), '_', ' ');
    datasets << json{{"name", name},
                     {"title", kDatasetTitles[d]},
                     {"description", "A benchmark for " + words + " collected from public sources"}}
                    .dump()
             << '\n';
  }
  fx.accuracy_csv = accuracy.str();
  fx.datasets_jsonl = datasets.str();
  return fx;
}

void write_fixture(const Fixture& fixture, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  io::write_file_atomic(dir / "papers.jsonl", fixture.papers_jsonl);
  io::write_file_atomic(dir / "pages.jsonl", fixture.pages_jsonl);
  io::write_file_atomic(dir / "seeds.json", fixture.seeds_json);
  io::write_file_atomic(dir / "review_overrides.tsv", fixture.overrides_tsv);
  io::write_file_atomic(dir / "accuracy.csv", fixture.accuracy_csv);
  io::write_file_atomic(dir / "impl_map.tsv", fixture.impl_map_tsv);
  io::write_file_atomic(dir / "datasets.jsonl", fixture.datasets_jsonl);
}

}  // namespace sommelier::fixture
