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

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "sommelier/embedding.hpp"

namespace sommelier::oracle {

// Straight transcription of the weighted least-squares objective, summing
// both orientations of every pair in long double.
inline double naive_loss(const EmbeddingModel& m,
                         const std::map<std::pair<std::string, std::string>, double>& x,
                         double alpha, double x_max) {
  auto row = [&](const std::string& term) {
    for (std::size_t i = 0; i < m.terms.size(); ++i) {
      if (m.terms[i] == term) return i;
    }
    return m.terms.size();
  };
  long double total = 0;
  for (const auto& [pair, value] : x) {
    const std::size_t a = row(pair.first), b = row(pair.second);
    const long double f = value < x_max ? std::pow(value / x_max, alpha) : 1.0;
    for (auto [i, j] : {std::pair{a, b}, std::pair{b, a}}) {
      long double dot = 0;
      for (std::size_t k = 0; k < m.dim; ++k) {
        dot += static_cast<long double>(m.word[i * m.dim + k]) * m.context[j * m.dim + k];
      }
      const long double r = dot + m.word_bias[i] + m.context_bias[j] - std::log((long double)value);
      total += f * r * r;
    }
  }
  return static_cast<double>(total);
}

}  // namespace sommelier::oracle
