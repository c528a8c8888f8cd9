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

#include "sommelier/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sommelier/error.hpp"

namespace sommelier {

std::string_view to_string(TermLabel label) {
  switch (label) {
    case TermLabel::kAlgorithm: return "algorithm";
    case TermLabel::kProblem: return "problem";
    case TermLabel::kOther: return "other";
  }
  return "unknown";
}

namespace {

ClassProbabilities softmax(const std::array<double, kClassCount>& scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  ClassProbabilities p;
  double total = 0.0;
  for (std::size_t k = 0; k < kClassCount; ++k) {
    p[k] = std::exp(scores[k] - top);
    total += p[k];
  }
  for (double& x : p) x /= total;
  return p;
}

}  // namespace

double RegressionTree::predict(std::span<const double> features) const {
  std::uint32_t at = 0;
  while (nodes_[at].feature >= 0) {
    const Node& n = nodes_[at];
    at = features[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
  }
  return nodes_[at].value;
}

std::size_t RegressionTree::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    deepest = std::max(deepest, level[k]);
    if (nodes_[k].feature >= 0) {
      level[nodes_[k].left] = level[k] + 1;
      level[nodes_[k].right] = level[k] + 1;
    }
  }
  return deepest;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

// Column orders sorted once per fit; constant columns are never split on.
struct SortedColumns {
  std::vector<std::size_t> features;
  std::vector<std::vector<std::uint32_t>> order;

  explicit SortedColumns(std::span<const std::vector<double>> x) {
    const std::size_t width = x.front().size();
    for (std::size_t f = 0; f < width; ++f) {
      std::vector<std::uint32_t> rows(x.size());
      std::iota(rows.begin(), rows.end(), 0u);
      std::stable_sort(rows.begin(), rows.end(), [&](std::uint32_t a, std::uint32_t b) {
        return x[a][f] < x[b][f];
      });
      if (x[rows.front()][f] == x[rows.back()][f]) continue;
      features.push_back(f);
      order.push_back(std::move(rows));
    }
  }
};

class TreeBuilder {
 public:
  TreeBuilder(std::span<const std::vector<double>> x, const SortedColumns& columns,
              std::span<const double> grad, std::span<const double> hess,
              const BoostingOptions& options)
      : x_(x), columns_(columns), grad_(grad), hess_(hess), options_(options),
        in_node_(x.size(), 0) {}

  RegressionTree build() {
    std::vector<std::uint32_t> rows(x_.size());
    std::iota(rows.begin(), rows.end(), 0u);
    tree_.nodes_.clear();
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  struct Split {
    double gain = 0.0;
    std::int32_t feature = -1;
    double threshold = 0.0;
  };

  double score(double g, double h) const { return g * g / (h + options_.l2); }

  Split best_split(const std::vector<std::uint32_t>& rows, double g_total,
                   double h_total) {
    Split best;
    const double parent = score(g_total, h_total);
    for (auto r : rows) in_node_[r] = 1;
    for (std::size_t c = 0; c < columns_.features.size(); ++c) {
      const std::size_t f = columns_.features[c];
      double g_left = 0.0, h_left = 0.0;
      std::size_t seen = 0;
      double previous = 0.0;
      for (std::uint32_t r : columns_.order[c]) {
        if (!in_node_[r]) continue;
        const double value = x_[r][f];
        if (seen > 0 && value != previous) {
          const double h_right = h_total - h_left;
          if (h_left >= options_.min_child_hessian &&
              h_right >= options_.min_child_hessian) {
            const double gain =
                score(g_left, h_left) + score(g_total - g_left, h_right) - parent;
            if (gain > best.gain + 1e-12) {
              best.gain = gain;
              best.feature = static_cast<std::int32_t>(f);
              best.threshold = previous + (value - previous) / 2.0;
              if (!(best.threshold > previous)) best.threshold = value;
            }
          }
        }
        g_left += grad_[r];
        h_left += hess_[r];
        previous = value;
        if (++seen == rows.size()) break;
      }
    }
    for (auto r : rows) in_node_[r] = 0;
    return best;
  }

  std::uint32_t grow(const std::vector<std::uint32_t>& rows, std::size_t depth) {
    double g = 0.0, h = 0.0;
    for (auto r : rows) {
      g += grad_[r];
      h += hess_[r];
    }
    const auto id = static_cast<std::uint32_t>(tree_.nodes_.size());
    tree_.nodes_.push_back({});
    Split split;
    if (depth < options_.max_depth && rows.size() > 1) split = best_split(rows, g, h);
    if (split.feature < 0) {
      tree_.nodes_[id].value = -g / (h + options_.l2) * options_.learning_rate;
      return id;
    }
    std::vector<std::uint32_t> left, right;
    for (auto r : rows) {
      (x_[r][static_cast<std::size_t>(split.feature)] < split.threshold ? left : right)
          .push_back(r);
    }
    tree_.nodes_[id].feature = split.feature;
    tree_.nodes_[id].threshold = split.threshold;
    const std::uint32_t l = grow(left, depth + 1);
    const std::uint32_t r = grow(right, depth + 1);
    tree_.nodes_[id].left = l;
    tree_.nodes_[id].right = r;
    return id;
  }

  std::span<const std::vector<double>> x_;
  const SortedColumns& columns_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  const BoostingOptions& options_;
  std::vector<std::uint8_t> in_node_;
  RegressionTree tree_;
};

GradientBoostedTrees GradientBoostedTrees::fit(
    std::span<const std::vector<double>> features, std::span<const TermLabel> labels,
    const BoostingOptions& options) {
  if (features.empty() || features.size() != labels.size()) {
    throw Error(ErrorKind::kInput, "need one label per example and at least one example");
  }
  const std::size_t width = features.front().size();
  for (const auto& row : features) {
    if (row.size() != width) {
      throw Error(ErrorKind::kInput, "examples have different feature lengths");
    }
  }
  if (options.rounds < 1 || options.max_depth < 1 || !(options.learning_rate > 0.0)) {
    throw Error(ErrorKind::kConfig, "boosting needs rounds >= 1, depth >= 1, rate > 0");
  }
  std::array<std::size_t, kClassCount> counts{};
  for (auto label : labels) ++counts[static_cast<std::size_t>(label)];
  for (std::size_t k = 0; k < kClassCount; ++k) {
    if (counts[k] == 0) {
      throw Error(ErrorKind::kConfig, "no training example labeled '" +
                                          std::string(to_string(static_cast<TermLabel>(k))) +
                                          "'");
    }
  }

  GradientBoostedTrees model;
  model.feature_count_ = width;
  const std::size_t n = features.size();
  for (std::size_t k = 0; k < kClassCount; ++k) {
    model.base_score_[k] = std::log(static_cast<double>(counts[k]) / static_cast<double>(n));
  }

  const SortedColumns columns(features);
  std::vector<std::array<double, kClassCount>> scores(n, model.base_score_);
  std::vector<double> grad(n), hess(n);
  auto log_loss = [&] {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const auto p = softmax(scores[r]);
      total -= std::log(std::max(p[static_cast<std::size_t>(labels[r])], 1e-300));
    }
    return total / static_cast<double>(n);
  };
  model.training_log_loss_.push_back(log_loss());

  for (std::size_t round = 0; round < options.rounds; ++round) {
    std::vector<ClassProbabilities> probs(n);
    for (std::size_t r = 0; r < n; ++r) probs[r] = softmax(scores[r]);
    std::array<RegressionTree, kClassCount> trees;
    for (std::size_t k = 0; k < kClassCount; ++k) {
      for (std::size_t r = 0; r < n; ++r) {
        const double p = probs[r][k];
        const double y = static_cast<std::size_t>(labels[r]) == k ? 1.0 : 0.0;
        grad[r] = p - y;
        hess[r] = std::max(p * (1.0 - p), 1e-16);
      }
      trees[k] = TreeBuilder(features, columns, grad, hess, options).build();
    }
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k < kClassCount; ++k) scores[r][k] += trees[k].predict(features[r]);
    }
    model.trees_.push_back(std::move(trees));
    model.training_log_loss_.push_back(log_loss());
  }
  return model;
}

ClassProbabilities GradientBoostedTrees::predict_proba(std::span<const double> features) const {
  if (features.size() != feature_count_) {
    throw Error(ErrorKind::kInput, "expected " + std::to_string(feature_count_) +
                                       " features, got " + std::to_string(features.size()));
  }
  std::array<double, kClassCount> scores = base_score_;
  for (const auto& round : trees_) {
    for (std::size_t k = 0; k < kClassCount; ++k) scores[k] += round[k].predict(features);
  }
  return softmax(scores);
}

}  // namespace sommelier
