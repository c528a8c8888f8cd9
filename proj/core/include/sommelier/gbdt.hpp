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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace sommelier {

// Class order is fixed: algorithm, problem, other.
enum class TermLabel : std::uint8_t { kAlgorithm = 0, kProblem = 1, kOther = 2 };
inline constexpr std::size_t kClassCount = 3;
using ClassProbabilities = std::array<double, kClassCount>;

std::string_view to_string(TermLabel label);

class TermClassifier {
 public:
  virtual ~TermClassifier() = default;
  virtual ClassProbabilities predict_proba(std::span<const double> features) const = 0;
  virtual std::size_t feature_count() const = 0;
};

struct BoostingOptions {
  std::size_t rounds = 50;
  std::size_t max_depth = 3;
  double learning_rate = 0.1;
  double l2 = 1.0;                  // leaf-weight regularization
  double min_child_hessian = 1e-3;  // smallest hessian sum allowed in a child
};

class RegressionTree {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when value < threshold
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    double value = 0.0;
  };

  double predict(std::span<const double> features) const;
  std::size_t depth() const;
  std::size_t leaf_count() const;
  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  friend class TreeBuilder;
  std::vector<Node> nodes_;
};

// Softmax-coupled gradient boosting: each round fits one depth-limited
// regression tree per class to the multinomial log-loss gradient, with
// Newton leaf weights -G / (H + l2) scaled by the learning rate. Scores start
// at the log class priors.
class GradientBoostedTrees final : public TermClassifier {
 public:
  // Throws Error(kInput) on empty or ragged input and Error(kConfig) when a
  // class has no example.
  static GradientBoostedTrees fit(std::span<const std::vector<double>> features,
                                  std::span<const TermLabel> labels,
                                  const BoostingOptions& options = {});

  ClassProbabilities predict_proba(std::span<const double> features) const override;
  std::size_t feature_count() const override { return feature_count_; }

  std::size_t round_count() const { return trees_.size(); }
  const RegressionTree& tree(std::size_t round, TermLabel label) const {
    return trees_[round][static_cast<std::size_t>(label)];
  }
  // Mean training log-loss before the first round, then after each round.
  const std::vector<double>& training_log_loss() const { return training_log_loss_; }

 private:
  std::size_t feature_count_ = 0;
  std::array<double, kClassCount> base_score_{};
  std::vector<std::array<RegressionTree, kClassCount>> trees_;
  std::vector<double> training_log_loss_;
};

}  // namespace sommelier
