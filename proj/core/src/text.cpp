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

#include "sommelier/text.hpp"

#include "sommelier/error.hpp"

namespace sommelier {
namespace {

bool is_separator(unsigned char c) {
  return c == ' ' || c == '-' || c == '_' || c == '\t' || c == '\n' ||
         c == '\r' || c == '\f' || c == '\v';
}

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

char lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                : static_cast<char>(c);
}

}  // namespace

std::optional<std::string> try_normalize_keyword(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_separator = false;
  for (unsigned char c : raw) {
    if (is_separator(c)) {
      pending_separator = !out.empty();
      continue;
    }
    if (pending_separator) {
      out.push_back('_');
      pending_separator = false;
    }
    out.push_back(lower(c));
  }
  if (out.empty()) return std::nullopt;
  return out;
}

std::string normalize_keyword(std::string_view raw) {
  auto normalized = try_normalize_keyword(raw);
  if (!normalized) {
    throw Error(ErrorKind::kNormalization,
                "keyword has no content after normalization: '" +
                    std::string(raw) + "'");
  }
  return *std::move(normalized);
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      current.push_back(lower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

}  // namespace sommelier
