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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sommelier {

// Keyword normalization shared by papers, page titles, seeds and queries:
// ASCII lowercase, every run of spaces, dashes or underscores collapsed to one
// underscore, separators at either edge stripped. Bytes >= 0x80 pass through.
// Throws Error(kNormalization) when nothing but separators remains.
std::string normalize_keyword(std::string_view raw);

std::optional<std::string> try_normalize_keyword(std::string_view raw);

// Lowercase word tokens; anything that is not an ASCII letter/digit (or a
// non-ASCII byte) separates tokens.
std::vector<std::string> tokenize_words(std::string_view text);

}  // namespace sommelier
