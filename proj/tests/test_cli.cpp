// tests/test_cli.cpp

// Copyright 2026  The SAWE authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABILITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Integration tests that drive the installed binary end to end. The binary
// path is baked in at compile time (SAWE_CLI_PATH).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

#include "sawe/clustering.hpp"
#include "sawe/corpus.hpp"
#include "sawe/embedding_io.hpp"
#include "sawe/model_io.hpp"
#include "sawe/skipgram.hpp"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args) {
  const std::string command = std::string(SAWE_CLI_PATH) + " " + args + " 2>&1";
  std::FILE* pipe = ::popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
    result.output.append(buf, n);
  }
  const int status = ::pclose(pipe);
  REQUIRE(WIFEXITED(status));
  result.exit_code = WEXITSTATUS(status);
  return result;
}

// Scratch directory wiped on destruction; paths are joined with '/'.
struct TmpDir {
  std::filesystem::path root;
  TmpDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() /
                        "sawe_cli_XXXXXX").string();
    REQUIRE(::mkdtemp(tmpl.data()) != nullptr);
    root = tmpl;
  }
  ~TmpDir() {
    std::error_code ec;
    std::filesystem::remove_all(root, ec);
  }
  std::string operator/(const std::string& name) const {
    return (root / name).string();
  }
};

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Small corpus the whole suite can share; one call per test keeps tests
// independent while staying fast.
void gen_small(const TmpDir& dir, const std::string& extra = "") {
  const CliResult r = run_cli(
      "gen-synth --classes 12 --topics 3 --utterances 120 --phonetic-dim 12 "
      "--corpus-out " + (dir / "corpus.jsonl") +
      " --reference-out " + (dir / "ref.csv") +
      " --judgments-out " + (dir / "jud.csv") + " " + extra);
  REQUIRE(r.exit_code == 0);
}

}  // namespace

TEST_CASE("usage errors exit 1, help exits 0") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("no-such-command").exit_code == 1);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("train --help").exit_code == 0);
  const CliResult bad_mode = run_cli("train --mode bogus --corpus x --out y");
  CHECK(bad_mode.exit_code == 1);
  const CliResult bad_flag = run_cli("cluster --no-such-flag");
  CHECK(bad_flag.exit_code == 1);
}

TEST_CASE("missing or mismatched inputs exit 2") {
  TmpDir dir;
  const CliResult missing =
      run_cli("cluster --corpus " + (dir / "absent.jsonl") +
              " --k 3 --out " + (dir / "c.sawe"));
  CHECK(missing.exit_code == 2);

  // Embeddings aligned with one corpus must be rejected against another.
  gen_small(dir);
  TmpDir other;
  const CliResult gen2 = run_cli(
      "--seed 9 gen-synth --classes 10 --topics 2 --utterances 80 "
      "--phonetic-dim 12 --corpus-out " + (other / "corpus.jsonl") +
      " --reference-out " + (other / "ref.csv") +
      " --judgments-out " + (other / "jud.csv"));
  REQUIRE(gen2.exit_code == 0);
  REQUIRE(run_cli("cluster --corpus " + (dir / "corpus.jsonl") +
                  " --k 6 --restarts 2 --out " + (dir / "cent.sawe"))
              .exit_code == 0);
  REQUIRE(run_cli("train --mode cluster-skipgram --corpus " +
                  (dir / "corpus.jsonl") + " --centroids " +
                  (dir / "cent.sawe") + " --dim 8 --epochs 1 --out " +
                  (dir / "sg.sawe"))
              .exit_code == 0);
  REQUIRE(run_cli("embed --model " + (dir / "sg.sawe") + " --corpus " +
                  (dir / "corpus.jsonl") + " --centroids " +
                  (dir / "cent.sawe") + " --out " + (dir / "emb.sawe"))
              .exit_code == 0);
  const CliResult mismatched =
      run_cli("eval-sim --embeddings " + (dir / "emb.sawe") + " --corpus " +
              (other / "corpus.jsonl") + " --reference " + (other / "ref.csv") +
              " --out " + (dir / "sim.json"));
  CHECK(mismatched.exit_code == 2);

  // A centroids file is not a trained model.
  const CliResult wrong_kind =
      run_cli("embed --model " + (dir / "cent.sawe") + " --corpus " +
              (dir / "corpus.jsonl") + " --out " + (dir / "x.sawe"));
  CHECK(wrong_kind.exit_code == 2);
  CHECK(wrong_kind.output.find("centroids") != std::string::npos);

  // cluster-skipgram without --centroids.
  const CliResult no_cent =
      run_cli("train --mode cluster-skipgram --corpus " +
              (dir / "corpus.jsonl") + " --out " + (dir / "y.sawe"));
  CHECK(no_cent.exit_code == 2);
  CHECK(no_cent.output.find("--centroids") != std::string::npos);
}

TEST_CASE("gen-synth reruns are byte-identical; other seeds differ") {
  TmpDir a;
  TmpDir b;
  TmpDir c;
  gen_small(a);
  gen_small(b);
  CHECK(file_bytes(a / "corpus.jsonl") == file_bytes(b / "corpus.jsonl"));
  CHECK(file_bytes(a / "ref.csv") == file_bytes(b / "ref.csv"));
  CHECK(file_bytes(a / "jud.csv") == file_bytes(b / "jud.csv"));
  const CliResult r = run_cli(
      "--seed 7 gen-synth --classes 12 --topics 3 --utterances 120 "
      "--phonetic-dim 12 --corpus-out " + (c / "corpus.jsonl") +
      " --reference-out " + (c / "ref.csv") +
      " --judgments-out " + (c / "jud.csv"));
  REQUIRE(r.exit_code == 0);
  CHECK(file_bytes(a / "corpus.jsonl") != file_bytes(c / "corpus.jsonl"));
}

TEST_CASE("cluster with k=1 recovers the global mean") {
  TmpDir dir;
  gen_small(dir);
  REQUIRE(run_cli("cluster --corpus " + (dir / "corpus.jsonl") +
                  " --k 1 --restarts 1 --no-normalize --out " +
                  (dir / "cent.sawe"))
              .exit_code == 0);
  const sawe::Centroids cent = sawe::load_centroids(dir / "cent.sawe");
  REQUIRE(cent.k() == 1);
  CHECK_FALSE(cent.normalized);

  const sawe::SegmentedCorpus corpus = sawe::load_corpus(dir / "corpus.jsonl");
  const sawe::Matrix points = corpus.embedding_matrix();
  for (std::size_t j = 0; j < points.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) mean += points(i, j);
    mean /= static_cast<double>(points.rows());
    // The stored centroid was quantized to float32 on disk.
    CHECK(cent.means(0, j) ==
          doctest::Approx(static_cast<double>(static_cast<float>(mean)))
              .epsilon(1e-6));
  }
}

TEST_CASE("cluster with k=N drives the objective to zero") {
  TmpDir dir;
  const CliResult gen = run_cli(
      "gen-synth --classes 4 --topics 2 --utterances 12 --phonetic-dim 6 "
      "--corpus-out " + (dir / "corpus.jsonl") +
      " --reference-out " + (dir / "ref.csv") +
      " --judgments-out " + (dir / "jud.csv"));
  REQUIRE(gen.exit_code == 0);
  const sawe::SegmentedCorpus corpus = sawe::load_corpus(dir / "corpus.jsonl");
  const CliResult r =
      run_cli("cluster --corpus " + (dir / "corpus.jsonl") + " --k " +
              std::to_string(corpus.num_segments()) + " --restarts 1 --out " +
              (dir / "cent.sawe"));
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("objective 0 ") != std::string::npos);
}

TEST_CASE("embed matches the library computation bit for bit") {
  TmpDir dir;
  gen_small(dir);
  REQUIRE(run_cli("cluster --corpus " + (dir / "corpus.jsonl") +
                  " --k 6 --restarts 2 --out " + (dir / "cent.sawe"))
              .exit_code == 0);
  REQUIRE(run_cli("train --mode cluster-skipgram --corpus " +
                  (dir / "corpus.jsonl") + " --centroids " +
                  (dir / "cent.sawe") + " --dim 8 --epochs 1 --out " +
                  (dir / "sg.sawe"))
              .exit_code == 0);
  REQUIRE(run_cli("embed --model " + (dir / "sg.sawe") + " --corpus " +
                  (dir / "corpus.jsonl") + " --centroids " +
                  (dir / "cent.sawe") + " --out " + (dir / "emb.sawe"))
              .exit_code == 0);

  const sawe::SegmentedCorpus corpus = sawe::load_corpus(dir / "corpus.jsonl");
  const sawe::Centroids cent = sawe::load_centroids(dir / "cent.sawe");
  const sawe::SkipgramModel model = sawe::load_skipgram_model(dir / "sg.sawe");
  const std::vector<sawe::SoftLabel> labels =
      sawe::soft_labels_batch(corpus, cent);
  const sawe::EmbeddingTable table = sawe::load_embeddings(dir / "emb.sawe");
  REQUIRE(table.rows() == corpus.num_segments());
  REQUIRE(table.dim == model.d());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const std::vector<double> z = sawe::embed_segment(model, labels[i]);
    const auto row = table.row(i);
    for (std::size_t j = 0; j < z.size(); ++j) {
      CHECK(row[j] == static_cast<float>(z[j]));
    }
  }
  CHECK(table.ids == corpus.segment_ids());
}

TEST_CASE("train with zero epochs writes a usable initialized model") {
  TmpDir dir;
  gen_small(dir);
  const CliResult r = run_cli(
      "train --mode projection --corpus " + (dir / "corpus.jsonl") +
      " --dim 8 --hidden-dim 16 --epochs 0 --out " + (dir / "proj.sawe"));
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("0 epochs") != std::string::npos);
  CHECK(sawe::model_kind(dir / "proj.sawe") == "projection");
  CHECK(run_cli("embed --model " + (dir / "proj.sawe") + " --corpus " +
                (dir / "corpus.jsonl") + " --out " + (dir / "pe.sawe"))
            .exit_code == 0);
}

TEST_CASE("full pipeline produces parseable reports and is deterministic") {
  TmpDir a;
  for (const TmpDir* dir : {&a}) {
    gen_small(*dir);
  }
  const auto pipeline = [&](const TmpDir& dir, const std::string& threads) {
    REQUIRE(run_cli(threads + " cluster --corpus " + (dir / "corpus.jsonl") +
                    " --k 12 --restarts 3 --out " + (dir / "cent.sawe"))
                .exit_code == 0);
    REQUIRE(run_cli(threads + " train --mode cluster-skipgram --corpus " +
                    (dir / "corpus.jsonl") + " --centroids " +
                    (dir / "cent.sawe") + " --dim 12 --epochs 2 --out " +
                    (dir / "sg.sawe"))
                .exit_code == 0);
    REQUIRE(run_cli(threads + " embed --model " + (dir / "sg.sawe") +
                    " --corpus " + (dir / "corpus.jsonl") + " --centroids " +
                    (dir / "cent.sawe") + " --out " + (dir / "emb.sawe"))
                .exit_code == 0);
  };
  pipeline(a, "--threads 1");

  REQUIRE(run_cli("eval-sim --embeddings " + (a / "emb.sawe") + " --corpus " +
                  (a / "corpus.jsonl") + " --reference " + (a / "ref.csv") +
                  " --out " + (a / "sim.json"))
              .exit_code == 0);
  REQUIRE(run_cli("eval-qbe --embeddings " + (a / "emb.sawe") + " --corpus " +
                  (a / "corpus.jsonl") + " --judgments " + (a / "jud.csv") +
                  " --mask --out " + (a / "qbe.json") + " --per-keyword-out " +
                  (a / "qbe.csv"))
              .exit_code == 0);
  REQUIRE(run_cli("export-pca --embeddings " + (a / "emb.sawe") + " --corpus " +
                  (a / "corpus.jsonl") + " --out " + (a / "pca.csv") +
                  " --neighbors 3 --neighbors-out " + (a / "nn.csv"))
              .exit_code == 0);

  const nlohmann::json sim = nlohmann::json::parse(file_bytes(a / "sim.json"));
  CHECK(sim.at("n_classes").get<int>() == 12);
  const double rho = sim.at("rho_avg").get<double>();
  CHECK(rho >= -1.0);
  CHECK(rho <= 1.0);
  CHECK(sim.at("per_repeat").size() == 10);

  const nlohmann::json qbe = nlohmann::json::parse(file_bytes(a / "qbe.json"));
  CHECK(qbe.at("mask").get<bool>());
  CHECK(qbe.at("p_at_10").get<double>() >= 0.0);
  CHECK(qbe.at("p_at_10").get<double>() <= 1.0);
  CHECK(qbe.at("eer").get<double>() >= 0.0);
  CHECK(qbe.at("eer").get<double>() <= 1.0);
  CHECK(qbe.at("per_keyword").size() +
            qbe.at("excluded_keywords").size() == 12);

  // points CSV: header plus one row per class.
  std::istringstream pca(file_bytes(a / "pca.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(pca, line)) ++lines;
  CHECK(lines == 13);

  // Same pipeline with a different thread count: byte-identical artifacts.
  TmpDir b;
  gen_small(b);
  pipeline(b, "--threads 3");
  CHECK(file_bytes(a / "cent.sawe") == file_bytes(b / "cent.sawe"));
  CHECK(file_bytes(a / "sg.sawe") == file_bytes(b / "sg.sawe"));
  CHECK(file_bytes(a / "emb.sawe") == file_bytes(b / "emb.sawe"));
}

TEST_CASE("config file supplies defaults and flags override it") {
  TmpDir dir;
  {
    std::ofstream cfg(dir / "sawe.ini");
    cfg << "seed=5\n\n[gen-synth]\nclasses=10\ntopics=2\nutterances=60\n"
        << "phonetic-dim=8\ncorpus-out=" << (dir / "corpus.jsonl")
        << "\nreference-out=" << (dir / "ref.csv")
        << "\njudgments-out=" << (dir / "jud.csv") << "\n";
  }
  REQUIRE(run_cli("--config " + (dir / "sawe.ini") + " gen-synth")
              .exit_code == 0);
  const sawe::SegmentedCorpus corpus = sawe::load_corpus(dir / "corpus.jsonl");
  CHECK(corpus.num_utterances() == 60);

  // Command line beats the file.
  REQUIRE(run_cli("--config " + (dir / "sawe.ini") +
                  " gen-synth --utterances 30 --corpus-out " +
                  (dir / "c2.jsonl") + " --reference-out " + (dir / "r2.csv") +
                  " --judgments-out " + (dir / "j2.csv"))
              .exit_code == 0);
  CHECK(sawe::load_corpus(dir / "c2.jsonl").num_utterances() == 30);
}
