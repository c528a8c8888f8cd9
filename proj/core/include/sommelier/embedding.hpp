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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sommelier/cooccurrence.hpp"

namespace sommelier {

struct WeightingConfig {
  double alpha = 0.75;
  double x_max = 10.0;

  // alpha in (0, 1], x_max > 0; throws Error(kConfig).
  void validate() const;
};

// f(x) = (x / x_max)^alpha below the saturation point, 1 above it.
double cooccurrence_weight(double x, const WeightingConfig& config);

inline constexpr double kAccumulatorEpsilon = 1e-8;

// Word vectors w, context vectors w~, both biases and their AdaGrad
// squared-gradient accumulators, row-major (term-major) in flat arrays.
struct EmbeddingModel {
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::size_t iterations_done = 0;
  std::vector<std::string> terms;

  std::vector<double> word;
  std::vector<double> context;
  std::vector<double> word_bias;
  std::vector<double> context_bias;

  std::vector<double> word_grad_sq;
  std::vector<double> context_grad_sq;
  std::vector<double> word_bias_grad_sq;
  std::vector<double> context_bias_grad_sq;

  std::size_t vocabulary_size() const { return terms.size(); }
  std::span<const double> word_row(std::size_t i) const {
    return {word.data() + i * dim, dim};
  }
  std::span<const double> context_row(std::size_t i) const {
    return {context.data() + i * dim, dim};
  }

  bool operator==(const EmbeddingModel&) const = default;
};

// Vector entries uniform in [-0.5/dim, 0.5/dim) from a 64-bit Mersenne
// Twister seeded with `seed`; biases zero; accumulators at kAccumulatorEpsilon.
EmbeddingModel init_model(std::vector<std::string> terms, std::size_t dim,
                          std::uint64_t seed);

// Weighted least-squares objective. Each stored unordered pair contributes
// both orientations (i, j) and (j, i). Throws Error(kStructure) when the
// model and matrix vocabularies differ.
double loss(const EmbeddingModel& model, const CooccurrenceMatrix& matrix,
            const WeightingConfig& config);

// dJ/dtheta for every parameter, laid out like the model arrays.
struct EmbeddingGradient {
  std::vector<double> word;
  std::vector<double> context;
  std::vector<double> word_bias;
  std::vector<double> context_bias;
};

EmbeddingGradient loss_gradient(const EmbeddingModel& model,
                                const CooccurrenceMatrix& matrix,
                                const WeightingConfig& config);

struct TrainOptions {
  std::size_t iterations = 20;
  double learning_rate = 0.05;
  // 1 = sequential and bit-reproducible. More threads apply unsynchronized
  // relaxed-atomic updates, so results depend on scheduling.
  std::size_t threads = 1;
};

struct TrainingReport {
  double initial_loss = 0.0;
  std::vector<double> losses;  // after each iteration
  std::size_t iterations = 0;
  std::chrono::duration<double> elapsed{0.0};

  double final_loss() const { return losses.empty() ? initial_loss : losses.back(); }
};

// One iteration is one pass over every stored pair in both orientations, in
// an order shuffled per iteration from (seed, iteration number). Throws
// Error(kConfig) for zero iterations and Error(kTraining) naming the pair
// when a residual becomes non-finite.
TrainingReport train(EmbeddingModel& model, const CooccurrenceMatrix& matrix,
                     const WeightingConfig& config, const TrainOptions& options);

// Dense term -> vector table, terms in ascending order.
class VectorStore {
 public:
  VectorStore() = default;
  VectorStore(std::vector<std::string> terms, std::size_t dim,
              std::vector<double> values);

  std::size_t size() const { return terms_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& terms() const { return terms_; }
  std::span<const double> vector(std::size_t index) const {
    return {values_.data() + index * dim_, dim_};
  }
  std::optional<std::size_t> index_of(std::string_view term) const;
  bool contains(std::string_view term) const { return index_of(term).has_value(); }
  std::optional<std::span<const double>> find(std::string_view term) const;

  // Positive per-row rescaling; used to check ranking invariance.
  void scale_row(std::size_t index, double factor);

  bool operator==(const VectorStore&) const = default;

 private:
  std::vector<std::string> terms_;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

// Final representation of each term is w + w~.
VectorStore export_vectors(const EmbeddingModel& model);

// u.v / (|u| |v|). Throws Error(kDomain) on length mismatch or a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);

// vectors.tsv: term<TAB>space-separated components, rows sorted by term.
void write_vectors_tsv(std::ostream& out, const VectorStore& vectors);
VectorStore read_vectors_tsv(std::istream& in);
VectorStore read_vectors_file(const std::filesystem::path& path);

// Checkpoint directory: header.json plus w.tsv, w_context.tsv, b.tsv,
// b_context.tsv and the matching adagrad_*.tsv accumulator files.
void save_checkpoint(const std::filesystem::path& dir, const EmbeddingModel& model,
                     const WeightingConfig& config);

struct Checkpoint {
  EmbeddingModel model;
  WeightingConfig config;
};
Checkpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace sommelier
