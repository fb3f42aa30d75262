// src/eval_intrinsic.cpp

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

#include "sawe/eval_intrinsic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "sawe/error.hpp"
#include "sawe/rng.hpp"
#include "sawe/vecmath.hpp"

namespace sawe {

std::vector<double> average_ranks(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    // [i, j) is a run of equal values; each gets the mean of ranks i+1..j.
    std::size_t j = i + 1;
    while (j < n && xs[order[j]] == xs[order[i]]) ++j;
    const double mean_rank =
        (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = mean_rank;
    i = j;
  }
  return ranks;
}

double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("spearman_rho: length mismatch");
  }
  if (xs.size() < 2) {
    throw std::invalid_argument("spearman_rho: need at least 2 observations");
  }
  const std::vector<double> rx = average_ranks(xs);
  const std::vector<double> ry = average_ranks(ys);
  const double n = static_cast<double>(rx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw NumericError("spearman_rho: zero rank variance (constant input)");
  }
  return sxy / std::sqrt(sxx * syy);
}

std::pair<std::string, std::string> ReferenceSimilarities::key(
    const std::string& a, const std::string& b) {
  return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

void ReferenceSimilarities::insert(const std::string& a, const std::string& b,
                                   double score) {
  auto [it, fresh] = scores_.emplace(key(a, b), score);
  if (!fresh && it->second != score) {
    throw DataError("conflicting similarity scores for pair (" + a + ", " + b +
                    ")");
  }
}

bool ReferenceSimilarities::contains(const std::string& a,
                                     const std::string& b) const {
  return scores_.count(key(a, b)) != 0;
}

double ReferenceSimilarities::at(const std::string& a,
                                 const std::string& b) const {
  auto it = scores_.find(key(a, b));
  if (it == scores_.end()) {
    throw DataError("no reference similarity for pair (" + a + ", " + b + ")");
  }
  return it->second;
}

namespace {

// Splits a CSV line on commas. Field values must not contain commas; the
// synthetic vocabularies used here never do.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double_field(const std::string& s, const std::string& path,
                          std::size_t lineno) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    throw DataError(path + ":" + std::to_string(lineno) + ": bad numeric field '" +
                    s + "'");
  }
  return v;
}

}  // namespace

ReferenceSimilarities load_reference_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open reference file: " + path);
  std::string line;
  std::size_t lineno = 0;
  ReferenceSimilarities ref;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    if (lineno == 1 && line.rfind("word_a,", 0) == 0) continue;  // header
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 3) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected 3 comma-separated fields");
    }
    ref.insert(f[0], f[1], parse_double_field(f[2], path, lineno));
  }
  if (ref.size() == 0) throw DataError("reference file has no pairs: " + path);
  return ref;
}

void save_reference_csv(
    const std::vector<std::tuple<std::string, std::string, double>>& rows,
    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write reference file: " + path);
  out << "word_a,word_b,score\n";
  char buf[64];
  for (const auto& [a, b, s] : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", s);
    out << a << ',' << b << ',' << buf << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

namespace {

struct PairList {
  std::vector<std::string> classes;              // sorted
  std::vector<std::pair<int, int>> pairs;        // index pairs i < j
  std::vector<double> reference_scores;          // aligned with pairs
};

PairList collect_pairs(
    const std::map<std::string, std::vector<std::vector<double>>>& by_class,
    const ReferenceSimilarities& reference) {
  if (by_class.size() < 2) {
    throw DataError("word-similarity evaluation needs at least 2 classes");
  }
  PairList out;
  for (const auto& [name, instances] : by_class) {
    if (instances.empty()) {
      throw DataError("class '" + name + "' has no embeddings");
    }
    out.classes.push_back(name);
  }
  for (std::size_t i = 0; i < out.classes.size(); ++i) {
    for (std::size_t j = i + 1; j < out.classes.size(); ++j) {
      out.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
      out.reference_scores.push_back(
          reference.at(out.classes[i], out.classes[j]));
    }
  }
  return out;
}

std::vector<double> class_mean(const std::vector<std::vector<double>>& xs) {
  std::vector<double> mean(xs.front().size(), 0.0);
  for (const auto& x : xs) {
    if (x.size() != mean.size()) {
      throw DataError("inconsistent embedding dimensions within a class");
    }
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += x[i];
  }
  const double inv = 1.0 / static_cast<double>(xs.size());
  for (double& m : mean) m *= inv;
  return mean;
}

double rho_for_representatives(const std::vector<std::vector<double>>& reps,
                               const PairList& plan) {
  std::vector<double> model(plan.pairs.size());
  for (std::size_t p = 0; p < plan.pairs.size(); ++p) {
    const auto [i, j] = plan.pairs[p];
    model[p] = cosine_similarity(reps[static_cast<std::size_t>(i)],
                                 reps[static_cast<std::size_t>(j)]);
  }
  return spearman_rho(model, plan.reference_scores);
}

}  // namespace

SimilarityReport eval_word_similarity(
    const std::map<std::string, std::vector<std::vector<double>>>&
        embeddings_by_class,
    const ReferenceSimilarities& reference, SimilarityMode mode, int n_repeats,
    std::uint64_t seed) {
  const PairList plan = collect_pairs(embeddings_by_class, reference);
  SimilarityReport report;

  if (mode == SimilarityMode::kAvg || mode == SimilarityMode::kBoth) {
    std::vector<std::vector<double>> means;
    means.reserve(plan.classes.size());
    for (const std::string& name : plan.classes) {
      means.push_back(class_mean(embeddings_by_class.at(name)));
    }
    report.rho_avg = rho_for_representatives(means, plan);
  }

  if (mode == SimilarityMode::kSingle || mode == SimilarityMode::kBoth) {
    if (n_repeats < 1) {
      throw std::invalid_argument("n_repeats must be >= 1");
    }
    Rng rng(derive_seed(seed, "eval-sim-single"));
    report.n_repeats = n_repeats;
    double total = 0.0;
    for (int r = 0; r < n_repeats; ++r) {
      std::vector<std::vector<double>> picks;
      picks.reserve(plan.classes.size());
      for (const std::string& name : plan.classes) {
        const auto& instances = embeddings_by_class.at(name);
        picks.push_back(instances[static_cast<std::size_t>(
            rng.below(instances.size()))]);
      }
      const double rho = rho_for_representatives(picks, plan);
      report.per_repeat.push_back(rho);
      total += rho;
    }
    report.rho_single = total / static_cast<double>(n_repeats);
  }

  return report;
}

}  // namespace sawe
