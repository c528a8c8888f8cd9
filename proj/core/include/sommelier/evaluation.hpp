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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sommelier/recommender.hpp"

namespace sommelier {

// Two accuracies closer than this count as the same (ties at the maximum).
inline constexpr double kAccuracyTolerance = 1e-12;

// Dataset x implementation accuracies in [0, 1]; absent cells mean "not
// evaluated". Rows are kept in file order.
class AccuracyMatrix {
 public:
  AccuracyMatrix() = default;
  // cells is row-major, datasets.size() x implementations.size().
  AccuracyMatrix(std::vector<std::string> datasets, std::vector<std::string> implementations,
                 std::vector<std::optional<double>> cells);

  const std::vector<std::string>& datasets() const { return datasets_; }
  const std::vector<std::string>& implementations() const { return implementations_; }
  std::optional<std::size_t> dataset_index(std::string_view name) const;
  std::optional<std::size_t> implementation_index(std::string_view name) const;
  std::optional<double> cell(std::size_t dataset, std::size_t implementation) const {
    return cells_[dataset * implementations_.size() + implementation];
  }

 private:
  std::vector<std::string> datasets_;
  std::vector<std::string> implementations_;
  std::vector<std::optional<double>> cells_;
  std::map<std::string, std::size_t, std::less<>> dataset_index_;
  std::map<std::string, std::size_t, std::less<>> implementation_index_;
};

// accuracy.csv: header "dataset,<impl>,...", one row per dataset, empty cells
// allowed. Double-quoted fields are accepted.
AccuracyMatrix read_accuracy_csv(std::istream& in);
AccuracyMatrix read_accuracy_file(const std::filesystem::path& path);

struct ImplementationRow {
  std::string implementation;
  std::string algorithm;
  std::string family;
};

// implementation -> (algorithm term, family). An implementation may appear
// under more than one algorithm; an algorithm's family is the family on its
// first row.
class ImplementationMap {
 public:
  ImplementationMap() = default;
  explicit ImplementationMap(std::vector<ImplementationRow> rows);

  const std::vector<ImplementationRow>& rows() const { return rows_; }
  bool has_algorithm(std::string_view algorithm) const;
  bool has_implementation(std::string_view implementation) const;
  std::optional<std::string> family_of(std::string_view algorithm) const;
  const std::vector<std::string>& implementations_of(std::string_view algorithm) const;
  const std::vector<std::string>& family_implementations(std::string_view family) const;
  std::vector<std::string> algorithms() const;  // sorted

 private:
  std::vector<ImplementationRow> rows_;
  std::map<std::string, std::vector<std::string>, std::less<>> by_algorithm_;
  std::map<std::string, std::vector<std::string>, std::less<>> by_family_;
  std::map<std::string, std::string, std::less<>> family_;
};

ImplementationMap read_impl_map_tsv(std::istream& in);
ImplementationMap read_impl_map_file(const std::filesystem::path& path);

struct DatasetDescription {
  std::string name;
  std::string title;
  std::string description;
};

std::vector<DatasetDescription> read_datasets_jsonl(std::istream& in);
std::vector<DatasetDescription> read_datasets_file(const std::filesystem::path& path);

// Throws Error(kLookup) for an unknown dataset.
double dataset_max_accuracy(const AccuracyMatrix& matrix, std::string_view dataset);

// nullopt means "not evaluated": no implementation has a cell for the dataset.
std::optional<double> best_of_algorithm(const AccuracyMatrix& matrix, std::string_view dataset,
                                        std::string_view algorithm,
                                        const ImplementationMap& map);
std::optional<double> best_of_family(const AccuracyMatrix& matrix, std::string_view dataset,
                                     std::string_view family, const ImplementationMap& map);

// 100 * achieved / max_accuracy. Throws Error(kDomain) unless max_accuracy > 0.
double relative_maximal_accuracy(double achieved, double max_accuracy);

enum class Granularity { kAlgorithm, kFamily };

// Families of the recommended algorithms, first occurrence only. Algorithms
// without a family are dropped.
std::vector<std::string> collapse_to_families(std::span<const std::string> recommendations,
                                              const ImplementationMap& map);

// 1-based rank of the first entry attaining the dataset maximum; nullopt when
// no entry does ("unranked"). Throws Error(kInput) for an empty list.
std::optional<std::size_t> rank_of_best(std::span<const std::string> recommendations,
                                        const AccuracyMatrix& matrix, std::string_view dataset,
                                        const ImplementationMap& map,
                                        Granularity granularity = Granularity::kAlgorithm);

// Throws Error(kDomain) on an empty list or a zero rank.
double mrr(std::span<const std::size_t> ranks);

struct CurvePoint {
  std::size_t k = 0;
  double mean_relative_accuracy = 0.0;
};

// For each k in 1..k_max: mean over datasets of the best relative accuracy in
// the top-k recommendations (0 when none of them was evaluated).
std::vector<CurvePoint> top_k_curve(std::span<const std::vector<std::string>> recommendations,
                                    std::span<const std::string> datasets,
                                    const AccuracyMatrix& matrix, const ImplementationMap& map,
                                    std::size_t k_max);

struct BaselineResult {
  std::string algorithm;
  double mean = 0.0;
  double stdev = 0.0;          // population
  std::size_t wins = 0;        // datasets where it attains the maximum
  std::size_t evaluated = 0;   // datasets with at least one cell for it
  std::size_t skipped = 0;     // datasets where it was not evaluated
};

// Throws Error(kConfig) when the algorithm is not in the map and Error(kInput)
// when it was evaluated on no dataset.
BaselineResult baseline_fixed_algorithm(const AccuracyMatrix& matrix,
                                        const ImplementationMap& map,
                                        std::string_view algorithm);

struct DatasetRow {
  std::string dataset;
  std::vector<std::string> matched_keywords;
  bool fallback_used = false;
  bool matched = false;                      // false when no keyword matched
  std::vector<std::string> ranking;          // evaluated algorithms only
  std::optional<std::size_t> rank_algorithm;
  std::optional<std::size_t> rank_family;
  std::optional<double> relative_accuracy;   // of the top-1 recommendation
};

struct EvaluationReport {
  std::vector<DatasetRow> rows;  // dataset-name order
  std::size_t dataset_count = 0;
  std::size_t unmatched = 0;
  std::size_t unranked_algorithm = 0;
  std::size_t unranked_family = 0;
  double mean_relative_accuracy = 0.0;
  double stdev_relative_accuracy = 0.0;
  std::size_t at_least_95 = 0;
  double mrr_algorithm = 0.0;
  double mrr_family = 0.0;
  double mean_rank_algorithm = 0.0;
  double mean_rank_family = 0.0;
  std::vector<CurvePoint> top_k_curve;
  std::optional<BaselineResult> baseline;
  bool consistent = false;
};

struct EvaluateOptions {
  std::size_t curve_k_max = 0;  // 0: longest ranking
  std::string baseline_algorithm = "random_forest";
  unsigned threads = 1;
};

// Throws Error(kInput) listing the matrix datasets that have no description.
EvaluationReport evaluate(const Recommender& recommender,
                          std::span<const DatasetDescription> descriptions,
                          const AccuracyMatrix& matrix, const ImplementationMap& map,
                          const EvaluateOptions& options = {});

// Recomputes the aggregates from the rows; true when they agree to 1e-9.
bool check_report_consistency(const EvaluationReport& report);

std::string report_to_json(const EvaluationReport& report);

}  // namespace sommelier
