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

#include "sommelier/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "sommelier/error.hpp"
#include "sommelier/io.hpp"

namespace sommelier {
namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_number) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        field += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) {
    throw Error(ErrorKind::kParse,
                "accuracy line " + std::to_string(line_number) + ": unterminated quote");
  }
  fields.push_back(std::move(field));
  return fields;
}

const std::vector<std::string>& empty_list() {
  static const std::vector<std::string> empty;
  return empty;
}

struct MeanStdev {
  double mean = 0.0;
  double stdev = 0.0;
};

MeanStdev population_stats(std::span<const double> values) {
  MeanStdev out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  double squares = 0.0;
  for (double v : values) squares += (v - out.mean) * (v - out.mean);
  out.stdev = std::sqrt(squares / static_cast<double>(values.size()));
  return out;
}

double mean_of(std::span<const std::size_t> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (auto v : values) sum += static_cast<double>(v);
  return sum / static_cast<double>(values.size());
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9; }

DatasetRow evaluate_dataset(const Recommender& recommender, const DatasetDescription& d,
                            const AccuracyMatrix& matrix, const ImplementationMap& map) {
  DatasetRow row;
  row.dataset = d.name;
  RecommendationList list;
  try {
    list = recommender.recommend(d.title, d.description, recommender.algorithm_count());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNoMatch && e.kind() != ErrorKind::kInput) throw;
    spdlog::warn("dataset '{}': {}", d.name, e.what());
    return row;
  }
  row.matched = true;
  row.matched_keywords = list.matched.terms;
  row.fallback_used = list.matched.fallback_used();
  for (const auto& entry : list.entries) {
    if (best_of_algorithm(matrix, d.name, entry.algorithm, map)) {
      row.ranking.push_back(entry.algorithm);
    }
  }
  if (row.ranking.empty()) return row;
  const double max_accuracy = dataset_max_accuracy(matrix, d.name);
  row.relative_accuracy = relative_maximal_accuracy(
      *best_of_algorithm(matrix, d.name, row.ranking.front(), map), max_accuracy);
  row.rank_algorithm = rank_of_best(row.ranking, matrix, d.name, map, Granularity::kAlgorithm);
  row.rank_family = rank_of_best(row.ranking, matrix, d.name, map, Granularity::kFamily);
  return row;
}

json curve_json(std::span<const CurvePoint> curve) {
  json out = json::array();
  for (const auto& p : curve) {
    out.push_back({{"k", p.k}, {"mean_relative_accuracy", p.mean_relative_accuracy}});
  }
  return out;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

AccuracyMatrix::AccuracyMatrix(std::vector<std::string> datasets,
                               std::vector<std::string> implementations,
                               std::vector<std::optional<double>> cells)
    : datasets_(std::move(datasets)),
      implementations_(std::move(implementations)),
      cells_(std::move(cells)) {
  if (cells_.size() != datasets_.size() * implementations_.size()) {
    throw Error(ErrorKind::kStructure, "accuracy matrix cell count does not match its shape");
  }
  for (std::size_t k = 0; k < implementations_.size(); ++k) {
    if (!implementation_index_.emplace(implementations_[k], k).second) {
      throw Error(ErrorKind::kStructure,
                  "duplicate implementation column '" + implementations_[k] + "'");
    }
  }
  for (std::size_t d = 0; d < datasets_.size(); ++d) {
    if (!dataset_index_.emplace(datasets_[d], d).second) {
      throw Error(ErrorKind::kStructure, "duplicate dataset row '" + datasets_[d] + "'");
    }
    bool any = false;
    for (std::size_t i = 0; i < implementations_.size(); ++i) {
      const auto& c = cell(d, i);
      if (!c) continue;
      if (!(*c >= 0.0 && *c <= 1.0)) {
        throw Error(ErrorKind::kDomain, "accuracy for '" + datasets_[d] + "' / '" +
                                            implementations_[i] + "' is outside [0, 1]");
      }
      any = true;
    }
    if (!any) {
      throw Error(ErrorKind::kStructure, "dataset '" + datasets_[d] + "' has no accuracy cell");
    }
  }
}

std::optional<std::size_t> AccuracyMatrix::dataset_index(std::string_view name) const {
  auto it = dataset_index_.find(name);
  if (it == dataset_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> AccuracyMatrix::implementation_index(std::string_view name) const {
  auto it = implementation_index_.find(name);
  if (it == implementation_index_.end()) return std::nullopt;
  return it->second;
}

AccuracyMatrix read_accuracy_csv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) header = split_csv_line(line, line_number);
  }
  if (header.size() < 2 || header.front() != "dataset") {
    throw Error(ErrorKind::kParse, "accuracy header must be 'dataset,<impl>,...'");
  }
  std::vector<std::string> implementations(header.begin() + 1, header.end());
  std::vector<std::string> datasets;
  std::vector<std::optional<double>> cells;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line, line_number);
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::kParse, "accuracy line " + std::to_string(line_number) +
                                         ": expected " + std::to_string(header.size()) +
                                         " fields, found " + std::to_string(fields.size()));
    }
    datasets.push_back(fields[0]);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      if (fields[k].empty()) {
        cells.emplace_back();
        continue;
      }
      try {
        cells.emplace_back(io::parse_double(fields[k]));
      } catch (const Error& e) {
        throw Error(ErrorKind::kParse,
                    "accuracy line " + std::to_string(line_number) + ": " + e.what());
      }
    }
  }
  return AccuracyMatrix(std::move(datasets), std::move(implementations), std::move(cells));
}

AccuracyMatrix read_accuracy_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_accuracy_csv(in);
}

ImplementationMap::ImplementationMap(std::vector<ImplementationRow> rows) : rows_(std::move(rows)) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : rows_) {
    if (r.implementation.empty() || r.algorithm.empty() || r.family.empty()) {
      throw Error(ErrorKind::kStructure, "implementation map row with an empty field");
    }
    if (!seen.emplace(r.implementation, r.algorithm).second) continue;
    by_algorithm_[r.algorithm].push_back(r.implementation);
    family_.emplace(r.algorithm, r.family);
  }
  for (const auto& [algorithm, implementations] : by_algorithm_) {
    auto& members = by_family_[family_.at(algorithm)];
    for (const auto& impl : implementations) {
      if (std::find(members.begin(), members.end(), impl) == members.end()) {
        members.push_back(impl);
      }
    }
  }
}

bool ImplementationMap::has_algorithm(std::string_view algorithm) const {
  return by_algorithm_.find(algorithm) != by_algorithm_.end();
}

bool ImplementationMap::has_implementation(std::string_view implementation) const {
  return std::any_of(rows_.begin(), rows_.end(),
                     [&](const ImplementationRow& r) { return r.implementation == implementation; });
}

std::optional<std::string> ImplementationMap::family_of(std::string_view algorithm) const {
  auto it = family_.find(algorithm);
  if (it == family_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& ImplementationMap::implementations_of(
    std::string_view algorithm) const {
  auto it = by_algorithm_.find(algorithm);
  return it == by_algorithm_.end() ? empty_list() : it->second;
}

const std::vector<std::string>& ImplementationMap::family_implementations(
    std::string_view family) const {
  auto it = by_family_.find(family);
  return it == by_family_.end() ? empty_list() : it->second;
}

std::vector<std::string> ImplementationMap::algorithms() const {
  std::vector<std::string> out;
  for (const auto& [algorithm, impls] : by_algorithm_) out.push_back(algorithm);
  return out;
}

ImplementationMap read_impl_map_tsv(std::istream& in) {
  std::vector<ImplementationRow> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = io::split(line, '\t');
    if (fields.size() != 3) {
      throw Error(ErrorKind::kParse, "impl map line " + std::to_string(line_number) +
                                         ": expected implementation<TAB>algorithm<TAB>family");
    }
    rows.push_back({std::string(fields[0]), std::string(fields[1]), std::string(fields[2])});
  }
  return ImplementationMap(std::move(rows));
}

ImplementationMap read_impl_map_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_impl_map_tsv(in);
}

std::vector<DatasetDescription> read_datasets_jsonl(std::istream& in) {
  std::vector<DatasetDescription> out;
  std::set<std::string> names;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "datasets line " + std::to_string(line_number);
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw Error(ErrorKind::kParse, where + ": not a JSON object");
    }
    auto text_field = [&](const char* key, bool required) -> std::string {
      auto it = doc.find(key);
      if (it == doc.end() || it->is_null()) {
        if (required) throw Error(ErrorKind::kParse, where + ": missing \"" + key + "\"");
        return {};
      }
      if (!it->is_string()) {
        throw Error(ErrorKind::kParse, where + ": \"" + key + "\" must be a string");
      }
      return it->get<std::string>();
    };
    DatasetDescription d{text_field("name", true), text_field("title", false),
                         text_field("description", false)};
    if (!names.insert(d.name).second) {
      throw Error(ErrorKind::kParse, where + ": duplicate dataset '" + d.name + "'");
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<DatasetDescription> read_datasets_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_datasets_jsonl(in);
}

double dataset_max_accuracy(const AccuracyMatrix& matrix, std::string_view dataset) {
  auto d = matrix.dataset_index(dataset);
  if (!d) throw Error(ErrorKind::kLookup, "unknown dataset '" + std::string(dataset) + "'");
  double best = -1.0;
  for (std::size_t i = 0; i < matrix.implementations().size(); ++i) {
    if (auto c = matrix.cell(*d, i)) best = std::max(best, *c);
  }
  return best;
}

namespace {

std::optional<double> best_over(const AccuracyMatrix& matrix, std::string_view dataset,
                                const std::vector<std::string>& implementations) {
  auto d = matrix.dataset_index(dataset);
  if (!d) throw Error(ErrorKind::kLookup, "unknown dataset '" + std::string(dataset) + "'");
  std::optional<double> best;
  for (const auto& impl : implementations) {
    auto i = matrix.implementation_index(impl);
    if (!i) continue;
    if (auto c = matrix.cell(*d, *i)) best = best ? std::max(*best, *c) : *c;
  }
  return best;
}

}  // namespace

std::optional<double> best_of_algorithm(const AccuracyMatrix& matrix, std::string_view dataset,
                                        std::string_view algorithm,
                                        const ImplementationMap& map) {
  return best_over(matrix, dataset, map.implementations_of(algorithm));
}

std::optional<double> best_of_family(const AccuracyMatrix& matrix, std::string_view dataset,
                                     std::string_view family, const ImplementationMap& map) {
  return best_over(matrix, dataset, map.family_implementations(family));
}

double relative_maximal_accuracy(double achieved, double max_accuracy) {
  if (!(max_accuracy > 0.0)) {
    throw Error(ErrorKind::kDomain, "maximal accuracy must be positive");
  }
  return 100.0 * achieved / max_accuracy;
}

std::vector<std::string> collapse_to_families(std::span<const std::string> recommendations,
                                              const ImplementationMap& map) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& algorithm : recommendations) {
    auto family = map.family_of(algorithm);
    if (family && seen.insert(*family).second) out.push_back(*family);
  }
  return out;
}

std::optional<std::size_t> rank_of_best(std::span<const std::string> recommendations,
                                        const AccuracyMatrix& matrix, std::string_view dataset,
                                        const ImplementationMap& map, Granularity granularity) {
  if (recommendations.empty()) throw Error(ErrorKind::kInput, "empty recommendation list");
  const double max_accuracy = dataset_max_accuracy(matrix, dataset);
  auto attains = [&](const std::optional<double>& a) {
    return a && std::abs(*a - max_accuracy) <= kAccuracyTolerance;
  };
  if (granularity == Granularity::kAlgorithm) {
    for (std::size_t k = 0; k < recommendations.size(); ++k) {
      if (attains(best_of_algorithm(matrix, dataset, recommendations[k], map))) return k + 1;
    }
    return std::nullopt;
  }
  const auto families = collapse_to_families(recommendations, map);
  for (std::size_t k = 0; k < families.size(); ++k) {
    if (attains(best_of_family(matrix, dataset, families[k], map))) return k + 1;
  }
  return std::nullopt;
}

double mrr(std::span<const std::size_t> ranks) {
  if (ranks.empty()) throw Error(ErrorKind::kDomain, "MRR of an empty rank list");
  double sum = 0.0;
  for (auto r : ranks) {
    if (r < 1) throw Error(ErrorKind::kDomain, "ranks are 1-based");
    sum += 1.0 / static_cast<double>(r);
  }
  return sum / static_cast<double>(ranks.size());
}

std::vector<CurvePoint> top_k_curve(std::span<const std::vector<std::string>> recommendations,
                                    std::span<const std::string> datasets,
                                    const AccuracyMatrix& matrix, const ImplementationMap& map,
                                    std::size_t k_max) {
  if (k_max < 1) throw Error(ErrorKind::kConfig, "k_max must be at least 1");
  if (recommendations.size() != datasets.size()) {
    throw Error(ErrorKind::kInput, "one recommendation list per dataset is required");
  }
  if (datasets.empty()) throw Error(ErrorKind::kInput, "no datasets for the top-k curve");
  std::vector<double> sums(k_max, 0.0);
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const double max_accuracy = dataset_max_accuracy(matrix, datasets[d]);
    double running = 0.0;
    const auto& list = recommendations[d];
    for (std::size_t k = 0; k < k_max; ++k) {
      if (k < list.size()) {
        if (auto a = best_of_algorithm(matrix, datasets[d], list[k], map)) {
          running = std::max(running, relative_maximal_accuracy(*a, max_accuracy));
        }
      }
      sums[k] += running;
    }
  }
  std::vector<CurvePoint> out;
  for (std::size_t k = 0; k < k_max; ++k) {
    out.push_back({k + 1, sums[k] / static_cast<double>(datasets.size())});
  }
  return out;
}

BaselineResult baseline_fixed_algorithm(const AccuracyMatrix& matrix,
                                        const ImplementationMap& map,
                                        std::string_view algorithm) {
  if (!map.has_algorithm(algorithm)) {
    throw Error(ErrorKind::kConfig,
                "baseline algorithm '" + std::string(algorithm) + "' is not mapped");
  }
  BaselineResult out;
  out.algorithm = std::string(algorithm);
  std::vector<double> values;
  for (const auto& dataset : matrix.datasets()) {
    auto best = best_of_algorithm(matrix, dataset, algorithm, map);
    if (!best) {
      ++out.skipped;
      continue;
    }
    const double max_accuracy = dataset_max_accuracy(matrix, dataset);
    values.push_back(relative_maximal_accuracy(*best, max_accuracy));
    if (std::abs(*best - max_accuracy) <= kAccuracyTolerance) ++out.wins;
  }
  if (values.empty()) {
    throw Error(ErrorKind::kInput,
                "baseline algorithm '" + std::string(algorithm) + "' has no accuracy cell");
  }
  out.evaluated = values.size();
  const auto stats = population_stats(values);
  out.mean = stats.mean;
  out.stdev = stats.stdev;
  return out;
}

EvaluationReport evaluate(const Recommender& recommender,
                          std::span<const DatasetDescription> descriptions,
                          const AccuracyMatrix& matrix, const ImplementationMap& map,
                          const EvaluateOptions& options) {
  std::map<std::string, const DatasetDescription*> by_name;
  for (const auto& d : descriptions) by_name.emplace(d.name, &d);
  std::vector<std::string> missing;
  for (const auto& name : matrix.datasets()) {
    if (!by_name.count(name)) missing.push_back(name);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& name : missing) list += (list.empty() ? "" : ", ") + name;
    throw Error(ErrorKind::kInput, "no description for dataset(s): " + list);
  }
  for (const auto& impl : matrix.implementations()) {
    if (!map.has_implementation(impl)) {
      spdlog::warn("implementation '{}' is not in the implementation map", impl);
    }
  }

  std::vector<std::string> names = matrix.datasets();
  std::sort(names.begin(), names.end());
  EvaluationReport report;
  report.dataset_count = names.size();
  report.rows.resize(names.size());

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, names.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < names.size(); k = next++) {
      try {
        report.rows[k] = evaluate_dataset(recommender, *by_name.at(names[k]), matrix, map);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> relative;
  std::vector<std::size_t> ranks_algorithm, ranks_family;
  std::vector<std::vector<std::string>> rankings;
  std::vector<std::string> ranked_names;
  std::size_t longest = 0;
  for (const auto& row : report.rows) {
    if (!row.matched) ++report.unmatched;
    if (row.relative_accuracy) {
      relative.push_back(*row.relative_accuracy);
      if (*row.relative_accuracy >= 95.0) ++report.at_least_95;
    }
    if (row.rank_algorithm) {
      ranks_algorithm.push_back(*row.rank_algorithm);
    } else {
      ++report.unranked_algorithm;
    }
    if (row.rank_family) {
      ranks_family.push_back(*row.rank_family);
    } else {
      ++report.unranked_family;
    }
    if (row.matched) {
      rankings.push_back(row.ranking);
      ranked_names.push_back(row.dataset);
      longest = std::max(longest, row.ranking.size());
    }
  }
  const auto stats = population_stats(relative);
  report.mean_relative_accuracy = stats.mean;
  report.stdev_relative_accuracy = stats.stdev;
  if (!ranks_algorithm.empty()) report.mrr_algorithm = mrr(ranks_algorithm);
  if (!ranks_family.empty()) report.mrr_family = mrr(ranks_family);
  report.mean_rank_algorithm = mean_of(ranks_algorithm);
  report.mean_rank_family = mean_of(ranks_family);
  const std::size_t k_max = options.curve_k_max ? options.curve_k_max : longest;
  if (k_max > 0 && !ranked_names.empty()) {
    report.top_k_curve = top_k_curve(rankings, ranked_names, matrix, map, k_max);
  }
  if (!options.baseline_algorithm.empty()) {
    if (map.has_algorithm(options.baseline_algorithm)) {
      report.baseline = baseline_fixed_algorithm(matrix, map, options.baseline_algorithm);
    } else {
      spdlog::warn("baseline algorithm '{}' is not in the implementation map",
                   options.baseline_algorithm);
    }
  }
  report.consistent = check_report_consistency(report);
  if (!report.consistent) spdlog::error("evaluation report aggregates are inconsistent");
  return report;
}

bool check_report_consistency(const EvaluationReport& report) {
  double sum = 0.0, squares = 0.0, reciprocal_a = 0.0, reciprocal_f = 0.0;
  std::size_t n = 0, na = 0, nf = 0, high = 0, unmatched = 0;
  for (const auto& row : report.rows) {
    unmatched += row.matched ? 0 : 1;
    if (row.relative_accuracy) {
      sum += *row.relative_accuracy;
      squares += *row.relative_accuracy * *row.relative_accuracy;
      high += *row.relative_accuracy >= 95.0 ? 1 : 0;
      ++n;
      if (!(*row.relative_accuracy > 0.0 && *row.relative_accuracy <= 100.0 + 1e-9)) return false;
    }
    if (row.rank_algorithm) {
      reciprocal_a += 1.0 / static_cast<double>(*row.rank_algorithm);
      ++na;
    }
    if (row.rank_family) {
      reciprocal_f += 1.0 / static_cast<double>(*row.rank_family);
      ++nf;
    }
  }
  const double mean = n ? sum / static_cast<double>(n) : 0.0;
  const double variance = n ? std::max(0.0, squares / static_cast<double>(n) - mean * mean) : 0.0;
  const double mrr_a = na ? reciprocal_a / static_cast<double>(na) : 0.0;
  const double mrr_f = nf ? reciprocal_f / static_cast<double>(nf) : 0.0;
  return report.rows.size() == report.dataset_count && unmatched == report.unmatched &&
         high == report.at_least_95 && report.dataset_count - na == report.unranked_algorithm &&
         report.dataset_count - nf == report.unranked_family &&
         close(mean, report.mean_relative_accuracy) &&
         std::abs(std::sqrt(variance) - report.stdev_relative_accuracy) <= 1e-6 &&
         close(mrr_a, report.mrr_algorithm) && close(mrr_f, report.mrr_family) &&
         (mrr_a <= 1.0 + 1e-12) && (mrr_f <= 1.0 + 1e-12);
}

std::string report_to_json(const EvaluationReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"dataset", row.dataset},
                    {"matched", row.matched},
                    {"matched_keywords", row.matched_keywords},
                    {"fallback_used", row.fallback_used},
                    {"recommended_ranking", row.ranking},
                    {"best_rank_algorithm", optional_json(row.rank_algorithm)},
                    {"best_rank_family", optional_json(row.rank_family)},
                    {"relative_maximal_accuracy", optional_json(row.relative_accuracy)}});
  }
  json doc;
  doc["datasets"] = rows;
  doc["dataset_count"] = report.dataset_count;
  doc["unmatched"] = report.unmatched;
  doc["unranked_algorithm"] = report.unranked_algorithm;
  doc["unranked_family"] = report.unranked_family;
  doc["mean_relative_accuracy"] = report.mean_relative_accuracy;
  doc["stdev_relative_accuracy"] = report.stdev_relative_accuracy;
  doc["at_least_95"] = report.at_least_95;
  doc["mrr_algorithm"] = report.mrr_algorithm;
  doc["mrr_family"] = report.mrr_family;
  doc["mean_rank_algorithm"] = report.mean_rank_algorithm;
  doc["mean_rank_family"] = report.mean_rank_family;
  doc["top_k_curve"] = curve_json(report.top_k_curve);
  if (report.baseline) {
    const auto& b = *report.baseline;
    doc["baseline"] = {{"algorithm", b.algorithm}, {"mean", b.mean},
                       {"stdev", b.stdev},         {"wins", b.wins},
                       {"evaluated", b.evaluated}, {"skipped", b.skipped}};
  } else {
    doc["baseline"] = nullptr;
  }
  doc["consistency_check"] = report.consistent;
  return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

}  // namespace sommelier
