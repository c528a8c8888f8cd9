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

// sommelier-fixture: writes the synthetic fixture files into a directory.

#include <iostream>

#include <CLI11.hpp>

#include "sommelier/error.hpp"
#include "sommelier/fixture.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write the synthetic fixture"};
  std::filesystem::path out = "data/fixture";
  sommelier::fixture::FixtureOptions options;
  app.add_option("--out", out, "Output directory");
  app.add_option("--seed", options.seed, "Random seed");
  app.add_option("--variant", options.variant, "Pairing variant (0-4)")
      ->check(CLI::Range(0, 4));
  CLI11_PARSE(app, argc, argv);
  try {
    sommelier::fixture::write_fixture(sommelier::fixture::make_fixture(options), out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
