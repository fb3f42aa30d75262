// tests/test_eval.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sawe/corpus.hpp"
#include "sawe/error.hpp"
#include "sawe/eval_intrinsic.hpp"
#include "sawe/eval_qbe.hpp"
#include "sawe/rng.hpp"
#include "sawe/vecmath.hpp"

using namespace sawe;

namespace {

std::string tmp_path(const std::string& name) {
  return std::string("sawe_test_") + name;
}

// Independent rank oracle: the mean tied rank of x_i is
// (#smaller + 1 + #smaller + #equal) / 2, found by counting, not sorting.
std::vector<double> oracle_ranks(const std::vector<double>& xs) {
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::size_t smaller = 0;
    std::size_t equal = 0;
    for (double x : xs) {
      if (x < xs[i]) ++smaller;
      if (x == xs[i]) ++equal;
    }
    ranks[i] = (static_cast<double>(smaller + 1) +
                static_cast<double>(smaller + equal)) /
               2.0;
  }
  return ranks;
}

double oracle_pearson(const std::vector<double>& xs,
                      const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double oracle_spearman(const std::vector<double>& xs,
                       const std::vector<double>& ys) {
  return oracle_pearson(oracle_ranks(xs), oracle_ranks(ys));
}

// Independent EER oracle: brute-force rates at every distinct threshold by
// plain counting, then the same interpolation rule at the crossing.
double oracle_eer(const std::vector<double>& rel,
                  const std::vector<double>& non) {
  std::vector<double> thetas;
  thetas.insert(thetas.end(), rel.begin(), rel.end());
  thetas.insert(thetas.end(), non.begin(), non.end());
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  double f1 = 1.0;
  double r1 = 0.0;
  for (double theta : thetas) {
    std::size_t fa = 0;
    for (double s : non) {
      if (s >= theta) ++fa;
    }
    std::size_t fr = 0;
    for (double s : rel) {
      if (s < theta) ++fr;
    }
    const double f2 = static_cast<double>(fa) / static_cast<double>(non.size());
    const double r2 = static_cast<double>(fr) / static_cast<double>(rel.size());
    if (f2 > r2) {
      f1 = f2;
      r1 = r2;
      continue;
    }
    const double s = (f1 - r1) / ((f1 - r1) + (r2 - f2));
    return f1 + s * (f2 - f1);
  }
  const double s = (f1 - r1) / ((f1 - r1) + 1.0);
  return f1 + s * (0.0 - f1);
}

SearchUtterance make_search_utterance(
    const std::string& id, const std::vector<std::string>& labels,
    const std::vector<std::vector<double>>& rows) {
  SearchUtterance u;
  u.id = id;
  u.labels = labels;
  u.embeddings = Matrix(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), u.embeddings.row(r).begin());
  }
  return u;
}

}  // namespace

TEST_CASE("average ranks handle ties with midpoints") {
  const std::vector<double> xs = {10.0, 20.0, 20.0, 30.0};
  const std::vector<double> ranks = average_ranks(xs);
  CHECK(ranks == std::vector<double>{1.0, 2.5, 2.5, 4.0});
  const std::vector<double> all_tied = {7.0, 7.0, 7.0};
  CHECK(average_ranks(all_tied) == std::vector<double>{2.0, 2.0, 2.0});
}

TEST_CASE("spearman exact values") {
  const std::vector<double> x = {1.0, 2.0, 3.0};
  CHECK(spearman_rho(x, std::vector<double>{1.0, 3.0, 2.0}) == 0.5);
  CHECK(spearman_rho(x, std::vector<double>{3.0, 2.0, 1.0}) == -1.0);
  CHECK(spearman_rho(x, x) == 1.0);
}

TEST_CASE("spearman is invariant to strictly monotone transforms") {
  Rng rng(101);
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<double> xs(12), ys(12), zs(12);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = rng.uniform(-5.0, 5.0);
      ys[i] = rng.uniform(-5.0, 5.0);
      zs[i] = std::exp(0.5 * ys[i]) + 3.0;  // strictly increasing in ys
    }
    CHECK(spearman_rho(xs, ys) == spearman_rho(xs, zs));
  }
}

TEST_CASE("spearman matches the counting oracle on tied lists") {
  Rng rng(202);
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 3 + rng.below(10);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Small integer grids force plenty of ties.
      xs[i] = static_cast<double>(rng.below(4));
      ys[i] = static_cast<double>(rng.below(4));
    }
    const bool xconst = std::all_of(xs.begin(), xs.end(),
                                    [&](double v) { return v == xs[0]; });
    const bool yconst = std::all_of(ys.begin(), ys.end(),
                                    [&](double v) { return v == ys[0]; });
    if (xconst || yconst) {
      CHECK_THROWS_AS((void)spearman_rho(xs, ys), NumericError);
      continue;
    }
    CHECK(spearman_rho(xs, ys) == doctest::Approx(oracle_spearman(xs, ys))
                                      .epsilon(1e-12));
  }
}

TEST_CASE("spearman rejects bad input") {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  const std::vector<double> b = {1.0, 2.0};
  CHECK_THROWS_AS((void)spearman_rho(a, b), std::invalid_argument);
  CHECK_THROWS_AS((void)spearman_rho(std::vector<double>{1.0},
                                     std::vector<double>{2.0}),
                  std::invalid_argument);
  const std::vector<double> c = {4.0, 4.0, 4.0};
  CHECK_THROWS_AS((void)spearman_rho(a, c), NumericError);
}

TEST_CASE("reference similarities are symmetric") {
  ReferenceSimilarities ref;
  ref.insert("cat", "dog", 0.8);
  CHECK(ref.at("cat", "dog") == 0.8);
  CHECK(ref.at("dog", "cat") == 0.8);
  CHECK(ref.contains("dog", "cat"));
  CHECK(!ref.contains("cat", "fish"));
  CHECK_NOTHROW(ref.insert("dog", "cat", 0.8));  // same score is fine
  CHECK_THROWS_AS(ref.insert("dog", "cat", 0.7), DataError);
  CHECK_THROWS_AS((void)ref.at("cat", "fish"), DataError);
}

TEST_CASE("reference CSV round trip and errors") {
  const std::string path = tmp_path("ref.csv");
  save_reference_csv({{"alpha", "beta", 0.75},
                      {"alpha", "gamma", -0.125},
                      {"beta", "gamma", 1.0 / 3.0}},
                     path);
  const ReferenceSimilarities ref = load_reference_csv(path);
  CHECK(ref.size() == 3);
  CHECK(ref.at("beta", "alpha") == 0.75);
  CHECK(ref.at("gamma", "alpha") == -0.125);
  CHECK(ref.at("gamma", "beta") == 1.0 / 3.0);  // %.17g round-trips exactly
  std::remove(path.c_str());

  const std::string bad = tmp_path("ref_bad.csv");
  {
    std::ofstream out(bad);
    out << "word_a,word_b,score\n";
    out << "a,b\n";
  }
  try {
    (void)load_reference_csv(bad);
    CHECK(false);
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  {
    std::ofstream out(bad);
    out << "a,b,not_a_number\n";
  }
  CHECK_THROWS_AS((void)load_reference_csv(bad), DataError);
  std::remove(bad.c_str());
  CHECK_THROWS_AS((void)load_reference_csv(tmp_path("ref_missing.csv")),
                  DataError);
}

namespace {

// Three classes on the unit circle: angles chosen so the cosine order of
// the pairs is (a,b) > (a,c) > (b,c).
std::map<std::string, std::vector<std::vector<double>>> circle_classes() {
  auto at = [](double deg) {
    const double rad = deg * 3.14159265358979323846 / 180.0;
    return std::vector<double>{std::cos(rad), std::sin(rad)};
  };
  return {{"a", {at(0.0)}}, {"b", {at(50.0)}}, {"c", {at(-60.0)}}};
}

ReferenceSimilarities circle_reference(double sab, double sac, double sbc) {
  ReferenceSimilarities ref;
  ref.insert("a", "b", sab);
  ref.insert("a", "c", sac);
  ref.insert("b", "c", sbc);
  return ref;
}

}  // namespace

TEST_CASE("word similarity avg mode recovers the pair ranking") {
  const auto classes = circle_classes();
  // Reference agrees with the cosine order -> rho 1; reversed -> rho -1.
  const auto agree = circle_reference(0.9, 0.5, 0.1);
  const auto report =
      eval_word_similarity(classes, agree, SimilarityMode::kAvg);
  CHECK(report.rho_avg == 1.0);
  CHECK(report.per_repeat.empty());
  CHECK(report.n_repeats == 0);
  const auto disagree = circle_reference(0.1, 0.5, 0.9);
  CHECK(eval_word_similarity(classes, disagree, SimilarityMode::kAvg).rho_avg ==
        -1.0);
}

TEST_CASE("word similarity avg mode is invariant to duplicating instances") {
  Rng rng(303);
  std::map<std::string, std::vector<std::vector<double>>> classes;
  for (int c = 0; c < 5; ++c) {
    std::vector<std::vector<double>> instances;
    const int count = 1 + static_cast<int>(rng.below(4));
    for (int i = 0; i < count; ++i) {
      std::vector<double> v(6);
      for (double& x : v) x = rng.uniform(-1.0, 1.0);
      instances.push_back(v);
    }
    classes["w" + std::to_string(c)] = instances;
  }
  ReferenceSimilarities ref;
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      ref.insert("w" + std::to_string(i), "w" + std::to_string(j),
                 rng.uniform(0.0, 1.0));
    }
  }
  const double base =
      eval_word_similarity(classes, ref, SimilarityMode::kAvg).rho_avg;
  auto doubled = classes;
  for (auto& [name, instances] : doubled) {
    const auto copy = instances;
    instances.insert(instances.end(), copy.begin(), copy.end());
  }
  const double dup =
      eval_word_similarity(doubled, ref, SimilarityMode::kAvg).rho_avg;
  CHECK(dup == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("word similarity single mode with one instance per class") {
  const auto classes = circle_classes();
  const auto ref = circle_reference(0.9, 0.5, 0.1);
  const auto report =
      eval_word_similarity(classes, ref, SimilarityMode::kBoth, 4, 7);
  // Sampling from singleton classes always picks the only instance, so
  // every repeat equals the avg-mode value exactly.
  CHECK(report.n_repeats == 4);
  CHECK(report.per_repeat.size() == 4);
  for (double rho : report.per_repeat) CHECK(rho == report.rho_avg);
  CHECK(report.rho_single == report.rho_avg);
}

TEST_CASE("word similarity single mode is seeded and averaged") {
  Rng rng(404);
  std::map<std::string, std::vector<std::vector<double>>> classes;
  for (int c = 0; c < 6; ++c) {
    std::vector<std::vector<double>> instances;
    for (int i = 0; i < 5; ++i) {
      std::vector<double> v(4);
      for (double& x : v) x = rng.uniform(-1.0, 1.0);
      instances.push_back(v);
    }
    classes["w" + std::to_string(c)] = instances;
  }
  ReferenceSimilarities ref;
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      ref.insert("w" + std::to_string(i), "w" + std::to_string(j),
                 rng.uniform(-1.0, 1.0));
    }
  }
  const auto r1 = eval_word_similarity(classes, ref, SimilarityMode::kSingle,
                                       10, 42);
  const auto r2 = eval_word_similarity(classes, ref, SimilarityMode::kSingle,
                                       10, 42);
  CHECK(r1.per_repeat == r2.per_repeat);
  CHECK(r1.rho_single == r2.rho_single);
  double mean = 0.0;
  for (double rho : r1.per_repeat) mean += rho;
  mean /= static_cast<double>(r1.per_repeat.size());
  CHECK(r1.rho_single == doctest::Approx(mean).epsilon(1e-15));
  const auto r3 = eval_word_similarity(classes, ref, SimilarityMode::kSingle,
                                       10, 43);
  CHECK(r1.per_repeat != r3.per_repeat);
}

TEST_CASE("word similarity input validation") {
  const auto classes = circle_classes();
  ReferenceSimilarities incomplete;
  incomplete.insert("a", "b", 0.5);
  CHECK_THROWS_AS((void)eval_word_similarity(classes, incomplete,
                                             SimilarityMode::kAvg),
                  DataError);
  std::map<std::string, std::vector<std::vector<double>>> one = {
      {"a", {{1.0, 0.0}}}};
  const auto ref = circle_reference(0.9, 0.5, 0.1);
  CHECK_THROWS_AS((void)eval_word_similarity(one, ref, SimilarityMode::kAvg),
                  DataError);
  auto empty_class = classes;
  empty_class["b"].clear();
  CHECK_THROWS_AS((void)eval_word_similarity(empty_class, ref,
                                             SimilarityMode::kAvg),
                  DataError);
  CHECK_THROWS_AS((void)eval_word_similarity(classes, ref,
                                             SimilarityMode::kSingle, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("equal error rate closed forms") {
  // Perfect separation.
  CHECK(equal_error_rate(std::vector<double>{0.9, 0.8},
                         std::vector<double>{0.1, 0.2}) == 0.0);
  // Total inversion.
  CHECK(equal_error_rate(std::vector<double>{0.1},
                         std::vector<double>{0.9}) == 1.0);
  // Interleaved: one relevant above, one below the single non-relevant.
  CHECK(equal_error_rate(std::vector<double>{0.9, 0.4},
                         std::vector<double>{0.6}) == 0.5);
  // Crossing lands on an exact operating point.
  CHECK(equal_error_rate(std::vector<double>{0.8, 0.6},
                         std::vector<double>{0.7, 0.5}) == 0.5);
  // Interpolated crossing away from one half.
  CHECK(equal_error_rate(std::vector<double>{0.9, 0.8, 0.2},
                         std::vector<double>{0.5}) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("equal error rate matches the sweep oracle") {
  Rng rng(505);
  for (int inst = 0; inst < 120; ++inst) {
    const std::size_t nr = 1 + rng.below(20);
    const std::size_t nn = 1 + rng.below(20);
    std::vector<double> rel(nr), non(nn);
    const bool gridded = inst % 2 == 0;
    for (double& s : rel) {
      s = gridded ? 0.1 * static_cast<double>(rng.below(10))
                  : rng.uniform(-1.0, 1.0);
    }
    for (double& s : non) {
      s = gridded ? 0.1 * static_cast<double>(rng.below(10))
                  : rng.uniform(-1.0, 1.0);
    }
    const double got = equal_error_rate(rel, non);
    const double want = oracle_eer(rel, non);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("equal error rate is symmetric under role swap with negation") {
  Rng rng(606);
  for (int inst = 0; inst < 40; ++inst) {
    std::vector<double> rel(3 + rng.below(10));
    std::vector<double> non(3 + rng.below(10));
    for (double& s : rel) s = rng.uniform(-1.0, 1.0);
    for (double& s : non) s = rng.uniform(-1.0, 1.0);
    std::vector<double> neg_rel;
    std::vector<double> neg_non;
    for (double s : non) neg_rel.push_back(-s);
    for (double s : rel) neg_non.push_back(-s);
    CHECK(equal_error_rate(rel, non) ==
          doctest::Approx(equal_error_rate(neg_rel, neg_non)).epsilon(1e-12));
  }
}

TEST_CASE("equal error rate rejects bad input") {
  CHECK_THROWS_AS((void)equal_error_rate({}, std::vector<double>{0.5}),
                  DataError);
  CHECK_THROWS_AS((void)equal_error_rate(std::vector<double>{0.5}, {}),
                  DataError);
  const double nan = std::nan("");
  CHECK_THROWS_AS((void)equal_error_rate(std::vector<double>{nan},
                                         std::vector<double>{0.5}),
                  NumericError);
}

TEST_CASE("utterance score is the max segment cosine") {
  const std::vector<double> query = {1.0, 0.0};
  Matrix segs(3, 2);
  segs(0, 0) = 0.0;
  segs(0, 1) = 1.0;  // cosine 0
  segs(1, 0) = 1.0;
  segs(1, 1) = 1.0;  // cosine 1/sqrt(2)
  segs(2, 0) = 2.0;
  segs(2, 1) = 0.0;  // cosine 1 (scale invariant)
  CHECK(score_utterance(query, segs) == 1.0);

  Matrix empty(0, 2);
  CHECK_THROWS_AS((void)score_utterance(query, empty), DataError);
  Matrix zero(1, 2);
  CHECK_THROWS_AS((void)score_utterance(query, zero), NumericError);
  CHECK_THROWS_AS((void)score_utterance(std::vector<double>{0.0, 0.0}, segs),
                  NumericError);
  Matrix wrong(1, 3);
  wrong(0, 0) = 1.0;
  CHECK_THROWS_AS((void)score_utterance(query, wrong), DataError);
}

TEST_CASE("ranking is by descending score with id tie break") {
  SearchCollection coll;
  coll.push_back(make_search_utterance("u_c", {"w"}, {{1.0, 0.0}}));
  coll.push_back(make_search_utterance("u_a", {"w"}, {{1.0, 0.0}}));
  coll.push_back(make_search_utterance("u_b", {"w"}, {{0.0, 1.0}}));
  const std::vector<double> query = {1.0, 0.0};
  const auto ranked = rank_collection(query, coll);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].id == "u_a");  // tie with u_c broken by id
  CHECK(ranked[1].id == "u_c");
  CHECK(ranked[2].id == "u_b");
  CHECK(ranked[0].score == 1.0);
  CHECK(ranked[2].score == 0.0);
  CHECK_THROWS_AS((void)rank_collection(query, SearchCollection{}), DataError);
}

TEST_CASE("serial and parallel collection scoring are bit-identical") {
  Rng rng(707);
  SearchCollection coll;
  for (int u = 0; u < 57; ++u) {
    std::vector<std::vector<double>> rows(1 + rng.below(6),
                                          std::vector<double>(8));
    for (auto& row : rows) {
      for (double& v : row) v = rng.uniform(-1.0, 1.0);
    }
    coll.push_back(
        make_search_utterance("u" + std::to_string(u), {}, rows));
    coll.back().labels.assign(rows.size(), "w");
  }
  std::vector<double> query(8);
  for (double& v : query) v = rng.uniform(-1.0, 1.0);
  std::vector<double> serial, parallel;
  kernels::score_collection_serial(query, coll, serial);
  kernels::score_collection_parallel(query, coll, parallel);
  CHECK(serial == parallel);
  for (std::size_t i = 0; i < coll.size(); ++i) {
    CHECK(serial[i] == score_utterance(query, coll[i].embeddings));
  }
}

TEST_CASE("make_collection aligns flat rows with utterances") {
  std::vector<Utterance> utts(2);
  utts[0].id = "u0";
  utts[0].speaker = "s";
  for (int p = 0; p < 2; ++p) {
    Segment seg;
    seg.id = "u0s" + std::to_string(p);
    seg.position = p;
    seg.label = p == 0 ? std::optional<std::string>("cat") : std::nullopt;
    seg.embedding = {1.0, 0.0};
    utts[0].segments.push_back(seg);
  }
  utts[1].id = "u1";
  utts[1].speaker = "s";
  {
    Segment seg;
    seg.id = "u1s0";
    seg.position = 0;
    seg.label = "dog";
    seg.embedding = {0.0, 1.0};
    utts[1].segments.push_back(seg);
  }
  const auto corpus = SegmentedCorpus::FromUtterances(std::move(utts));
  Matrix table(3, 2);
  table(0, 0) = 10.0;
  table(1, 0) = 20.0;
  table(2, 1) = 30.0;
  const auto coll = make_collection(corpus, table);
  REQUIRE(coll.size() == 2);
  CHECK(coll[0].embeddings.rows() == 2);
  CHECK(coll[0].embeddings(0, 0) == 10.0);
  CHECK(coll[0].embeddings(1, 0) == 20.0);
  CHECK(coll[0].labels == std::vector<std::string>{"cat", ""});
  CHECK(coll[1].embeddings(0, 1) == 30.0);
  CHECK(coll[1].labels == std::vector<std::string>{"dog"});
  Matrix wrong(2, 2);
  CHECK_THROWS_AS((void)make_collection(corpus, wrong), DataError);
}

TEST_CASE("masking removes exact label matches and drops empty utterances") {
  SearchCollection coll;
  coll.push_back(make_search_utterance("u0", {"cat", "dog"},
                                       {{1.0, 0.0}, {0.0, 1.0}}));
  coll.push_back(make_search_utterance("u1", {"cat"}, {{1.0, 1.0}}));
  coll.push_back(make_search_utterance("u2", {"", "dog"},
                                       {{2.0, 0.0}, {0.0, 2.0}}));
  const auto [masked, dropped] = mask_exact_matches(coll, "cat");
  REQUIRE(masked.size() == 2);
  CHECK(masked[0].id == "u0");
  CHECK(masked[0].labels == std::vector<std::string>{"dog"});
  CHECK(masked[0].embeddings.rows() == 1);
  CHECK(masked[0].embeddings(0, 1) == 1.0);
  CHECK(masked[1].id == "u2");
  CHECK(masked[1].embeddings.rows() == 2);
  CHECK(dropped == std::vector<std::string>{"u1"});
  // Unlabeled segments never match a class.
  const auto [m2, d2] = mask_exact_matches(coll, "dog");
  CHECK(m2.size() == 3);
  CHECK(d2.empty());
  CHECK(m2[2].labels == std::vector<std::string>{""});
  CHECK_THROWS_AS((void)mask_exact_matches(coll, ""), std::invalid_argument);
}

namespace {

QbEJudgments example_judgments() {
  QbEJudgments j;
  j.votes["kw"] = {{"u1", 5}, {"u2", 3}, {"u3", 1}, {"u4", 0}};
  return j;
}

std::map<std::string, std::vector<ScoredUtterance>> example_ranking() {
  return {{"kw",
           {{"u1", 0.9}, {"u3", 0.8}, {"u2", 0.7}, {"u4", 0.1}}}};
}

}  // namespace

TEST_CASE("qbe metrics on the worked example") {
  const auto result = qbe_metrics(example_ranking(), example_judgments());
  REQUIRE(result.per_keyword.count("kw") == 1);
  const KeywordMetrics& m = result.per_keyword.at("kw");
  CHECK(m.n_relevant == 2);
  // Top-2 holds u1 (relevant) and u3 (not): P@N = 1/2.
  CHECK(m.p_at_n == 0.5);
  // Both relevant utterances sit inside the top 10; denominator stays 10.
  CHECK(m.p_at_10 == doctest::Approx(0.2).epsilon(1e-15));
  // rel scores {0.9, 0.7}, non-rel {0.8, 0.1} cross at rate 1/2.
  CHECK(m.eer == 0.5);
  // Rank vectors: scores (4,3,2,1), votes (4,2,3,1) -> Pearson 0.8.
  CHECK(m.rho_votes == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(result.p_at_10 == m.p_at_10);
  CHECK(result.eer == m.eer);
  CHECK(result.excluded_keywords.empty());
}

TEST_CASE("keywords with no relevant utterance are excluded and reported") {
  auto judgments = example_judgments();
  judgments.votes["dead"] = {{"u1", 0}, {"u2", 2}, {"u3", 1}, {"u4", 0}};
  auto rankings = example_ranking();
  rankings["dead"] = rankings["kw"];
  const auto result = qbe_metrics(rankings, judgments);
  CHECK(result.per_keyword.size() == 1);
  CHECK(result.excluded_keywords == std::vector<std::string>{"dead"});
  // Macro averages cover only the surviving keyword.
  CHECK(result.p_at_n == 0.5);

  QbEJudgments only_dead;
  only_dead.votes["dead"] = {{"u1", 0}};
  std::map<std::string, std::vector<ScoredUtterance>> one = {
      {"dead", {{"u1", 0.5}}}};
  CHECK_THROWS_AS((void)qbe_metrics(one, only_dead), DataError);
}

TEST_CASE("qbe metrics validation") {
  auto rankings = example_ranking();
  QbEJudgments missing_kw;
  missing_kw.votes["other"] = {{"u1", 3}};
  CHECK_THROWS_AS((void)qbe_metrics(rankings, missing_kw), DataError);
  auto judgments = example_judgments();
  judgments.votes["kw"].erase("u4");
  CHECK_THROWS_AS((void)qbe_metrics(rankings, judgments), DataError);
  QbEJudgments all_rel;
  all_rel.votes["kw"] = {{"u1", 5}, {"u2", 4}, {"u3", 3}, {"u4", 3}};
  CHECK_THROWS_AS((void)qbe_metrics(rankings, all_rel), DataError);
}

namespace {

// Four single-segment utterances at fixed angles, two labeled "k".
SearchCollection qbe_collection() {
  auto vec = [](double deg) {
    const double rad = deg * 3.14159265358979323846 / 180.0;
    return std::vector<double>{std::cos(rad), std::sin(rad)};
  };
  SearchCollection coll;
  coll.push_back(make_search_utterance("u1", {"k"}, {vec(5.0)}));
  coll.push_back(make_search_utterance("u2", {"k", "x"},
                                       {vec(20.0), vec(170.0)}));
  coll.push_back(make_search_utterance("u3", {"y"}, {vec(60.0)}));
  coll.push_back(make_search_utterance("u4", {"z"}, {vec(150.0)}));
  return coll;
}

QbEJudgments qbe_judgments() {
  QbEJudgments j;
  j.votes["k"] = {{"u1", 5}, {"u2", 4}, {"u3", 2}, {"u4", 0}};
  return j;
}

}  // namespace

TEST_CASE("run_qbe averages per-instance metrics within a keyword") {
  const auto coll = qbe_collection();
  const auto judgments = qbe_judgments();
  const std::vector<double> q1 = {1.0, 0.0};
  const double rad = 10.0 * 3.14159265358979323846 / 180.0;
  const std::vector<double> q2 = {std::cos(rad), std::sin(rad)};

  const auto joint = run_qbe({{"k", {q1, q2}}}, coll, judgments, false);
  const auto solo1 = run_qbe({{"k", {q1}}}, coll, judgments, false);
  const auto solo2 = run_qbe({{"k", {q2}}}, coll, judgments, false);
  const KeywordMetrics& m = joint.per_keyword.at("k");
  CHECK(m.n_instances == 2);
  CHECK(m.p_at_10 ==
        doctest::Approx((solo1.p_at_10 + solo2.p_at_10) / 2.0).epsilon(1e-15));
  CHECK(m.eer ==
        doctest::Approx((solo1.eer + solo2.eer) / 2.0).epsilon(1e-15));
  CHECK(m.rho_votes == doctest::Approx((solo1.rho_votes + solo2.rho_votes) /
                                       2.0)
                           .epsilon(1e-15));
  // Both queries sit nearest the two relevant utterances.
  CHECK(m.p_at_n == 1.0);
  CHECK(m.eer == 0.0);
}

TEST_CASE("run_qbe masked mode rescores the filtered collection") {
  const auto coll = qbe_collection();
  const auto judgments = qbe_judgments();
  const std::vector<double> q = {1.0, 0.0};
  const auto unmasked = run_qbe({{"k", {q}}}, coll, judgments, false);
  const auto masked = run_qbe({{"k", {q}}}, coll, judgments, true);
  // Masking "k" drops u1 entirely and strips u2 to its far-away segment,
  // so the relevant set shrinks to u2 with a much worse score.
  CHECK(unmasked.per_keyword.at("k").n_relevant == 2);
  CHECK(masked.per_keyword.at("k").n_relevant == 1);
  CHECK(masked.eer > unmasked.eer);
  // A keyword whose relevant utterances all vanish under masking is
  // excluded rather than scored.
  QbEJudgments j2 = judgments;
  j2.votes["x"] = {{"u1", 4}, {"u2", 0}, {"u3", 1}, {"u4", 1}};
  const std::vector<double> qx = {-1.0, 0.2};
  auto masked2 = run_qbe({{"x", {qx}}}, coll, j2, true);
  // u2's "x" segment is stripped; u1 keeps its "k" segment and stays
  // relevant, so "x" survives with u1 as its only relevant utterance.
  CHECK(masked2.per_keyword.at("x").n_relevant == 1);
}

TEST_CASE("run_qbe input validation") {
  const auto coll = qbe_collection();
  const auto judgments = qbe_judgments();
  CHECK_THROWS_AS((void)run_qbe({}, coll, judgments, false), DataError);
  CHECK_THROWS_AS((void)run_qbe({{"k", {}}}, coll, judgments, false),
                  DataError);
  CHECK_THROWS_AS((void)run_qbe({{"nope", {{1.0, 0.0}}}}, coll, judgments,
                                false),
                  DataError);
}

TEST_CASE("judgments CSV round trip and errors") {
  const std::string path = tmp_path("judg.csv");
  QbEJudgments j;
  j.votes["alpha"] = {{"u1", 5}, {"u2", 0}};
  j.votes["beta"] = {{"u1", 3}};
  save_judgments_csv(j, path);
  const QbEJudgments back = load_judgments_csv(path);
  CHECK(back.votes == j.votes);
  std::remove(path.c_str());

  const std::string bad = tmp_path("judg_bad.csv");
  {
    std::ofstream out(bad);
    out << "keyword,utterance_id,votes\nk,u1,6\n";
  }
  CHECK_THROWS_AS((void)load_judgments_csv(bad), DataError);
  {
    std::ofstream out(bad);
    out << "k,u1,2\nk,u1,3\n";
  }
  try {
    (void)load_judgments_csv(bad);
    CHECK(false);
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }
  {
    std::ofstream out(bad);
    out << "k,u1,two\n";
  }
  CHECK_THROWS_AS((void)load_judgments_csv(bad), DataError);
  std::remove(bad.c_str());
}
