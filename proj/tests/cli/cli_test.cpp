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

// Drives the installed-style executables end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <string>

#include "sommelier/io.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& command) {
  RunResult r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::string artifact_flags(const fs::path& in, const fs::path& out) {
  return " --papers " + q(in / "papers.jsonl") + " --pages " + q(in / "pages.jsonl") +
         " --seeds " + q(in / "seeds.json") + " --overrides " + q(in / "review_overrides.tsv") +
         " --accuracy " + q(in / "accuracy.csv") + " --impl-map " + q(in / "impl_map.tsv") +
         " --datasets " + q(in / "datasets.jsonl") + " --vocab " + q(out / "vocab.tsv") +
         " --cooccur " + q(out / "cooccur.tsv") + " --vectors " + q(out / "vectors.tsv") +
         " --kb-algorithms " + q(out / "kb_algorithms.tsv") + " --kb-problems " +
         q(out / "kb_problems.tsv") + " --report " + q(out / "report.json") +
         " --dim 50 --iterations 40 --seed 42";
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() / "sommelier_cli_test";
    fs::remove_all(root_);
    fs::create_directories(root_ / "in");
    ASSERT_EQ(run(std::string(SOMMELIER_FIXTURE_BIN) + " --out " + q(root_ / "in")).status, 0);
  }
  void TearDown() override { fs::remove_all(root_); }

  RunResult sommelier(const std::string& command, const fs::path& out,
                      const std::string& extra = "") {
    return run(std::string(SOMMELIER_BIN) + " " + command + artifact_flags(root_ / "in", out) +
               extra + " 2>/dev/null");
  }

  void pipeline(const fs::path& out) {
    fs::create_directories(out);
    for (const char* cmd : {"ingest", "cooccur", "train", "build-kb", "evaluate"}) {
      ASSERT_EQ(sommelier(cmd, out).status, 0) << cmd;
    }
  }

  fs::path root_;
};

TEST_F(Cli, TwoRunsProduceIdenticalArtifacts) {
  pipeline(root_ / "a");
  pipeline(root_ / "b");
  for (const char* f : {"vocab.tsv", "cooccur.tsv", "vectors.tsv", "kb_algorithms.tsv",
                        "kb_problems.tsv", "report.json"}) {
    EXPECT_EQ(sommelier::io::read_file(root_ / "a" / f), sommelier::io::read_file(root_ / "b" / f))
        << f;
  }
}

TEST_F(Cli, RecommendPrintsJsonAndSignalsNoMatch) {
  pipeline(root_ / "a");
  const RunResult ok = sommelier("recommend", root_ / "a", " --title 'spam filtering dataset' --top-k 3");
  ASSERT_EQ(ok.status, 0);
  const json doc = json::parse(ok.out);
  EXPECT_EQ(doc["recommendations"].size(), 3u);
  EXPECT_EQ(doc["matched_keywords"], json::array({"spam_filtering"}));

  const RunResult none = run(std::string(SOMMELIER_BIN) + " recommend" +
                             artifact_flags(root_ / "in", root_ / "a") +
                             " --title 'weather forecast' 2>&1 >/dev/null");
  EXPECT_EQ(none.status, 3);
  EXPECT_EQ(json::parse(none.out)["kind"], "no_match");
}

TEST_F(Cli, UsageErrorsAndConfigFile) {
  EXPECT_EQ(run(std::string(SOMMELIER_BIN) + " dance 2>/dev/null").status, 2);
  EXPECT_EQ(sommelier("train", root_, " --dim 0").status, 2);
  EXPECT_EQ(run(std::string(SOMMELIER_BIN) + " ingest --papers /nonexistent/papers.jsonl --vocab " +
                q(root_ / "v.tsv") + " 2>/dev/null")
                .status,
            4);

  // A config file supplies values; flags still override them.
  const fs::path cfg = root_ / "config.json";
  sommelier::io::write_file_atomic(
      cfg, json{{"papers", (root_ / "in" / "papers.jsonl").string()},
                {"vocab", (root_ / "cfg_vocab.tsv").string()},
                {"min-count", 1000}}
               .dump());
  const std::string env = "SOMMELIER_CONFIG=" + q(cfg) + " ";
  EXPECT_EQ(run(env + SOMMELIER_BIN + " ingest --min-count 1 2>/dev/null").status, 0);
  EXPECT_FALSE(sommelier::io::read_file(root_ / "cfg_vocab.tsv").empty());
  EXPECT_EQ(run(env + SOMMELIER_BIN + " ingest 2>/dev/null").status, 0);
  EXPECT_TRUE(sommelier::io::read_file(root_ / "cfg_vocab.tsv").empty());
}

}  // namespace
