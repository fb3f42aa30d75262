// src/eval_qbe.cpp

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

#include "sawe/eval_qbe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "sawe/error.hpp"
#include "sawe/eval_intrinsic.hpp"
#include "sawe/parallel.hpp"
#include "sawe/vecmath.hpp"

namespace sawe {

SearchCollection make_collection(const SegmentedCorpus& corpus,
                                 const Matrix& embeddings) {
  if (embeddings.rows() != corpus.num_segments()) {
    throw DataError("embedding table has " + std::to_string(embeddings.rows()) +
                    " rows for " + std::to_string(corpus.num_segments()) +
                    " segments");
  }
  SearchCollection collection;
  collection.reserve(corpus.num_utterances());
  std::size_t flat = 0;
  for (const Utterance& utt : corpus.utterances()) {
    SearchUtterance su;
    su.id = utt.id;
    su.labels.reserve(utt.segments.size());
    su.embeddings = Matrix(utt.segments.size(), embeddings.cols());
    for (std::size_t s = 0; s < utt.segments.size(); ++s) {
      su.labels.push_back(utt.segments[s].label.value_or(""));
      const auto src = embeddings.row(flat++);
      std::copy(src.begin(), src.end(), su.embeddings.row(s).begin());
    }
    collection.push_back(std::move(su));
  }
  return collection;
}

namespace {

// Assumes dimensions, non-emptiness, and norms were already validated.
double score_core(std::span<const double> query, double query_norm,
                  const Matrix& segments) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < segments.rows(); ++r) {
    const auto row = segments.row(r);
    const double s = dot(query, row) / (query_norm * norm(row));
    if (s > best) best = s;
  }
  return best;
}

double validated_query_norm(std::span<const double> query) {
  const double qn = norm(query);
  if (!std::isfinite(qn) || qn == 0.0) {
    throw NumericError("query embedding has zero or non-finite norm");
  }
  return qn;
}

void validate_utterance(std::span<const double> query,
                        const SearchUtterance& utt) {
  if (utt.embeddings.rows() == 0) {
    throw DataError("utterance '" + utt.id + "' has no segments");
  }
  if (utt.embeddings.cols() != query.size()) {
    throw DataError("utterance '" + utt.id + "' has dimension " +
                    std::to_string(utt.embeddings.cols()) + ", query has " +
                    std::to_string(query.size()));
  }
  for (std::size_t r = 0; r < utt.embeddings.rows(); ++r) {
    const double n = norm(utt.embeddings.row(r));
    if (!std::isfinite(n) || n == 0.0) {
      throw NumericError("zero or non-finite segment norm in utterance '" +
                         utt.id + "'");
    }
  }
}

}  // namespace

double score_utterance(std::span<const double> query, const Matrix& segments) {
  const double qn = validated_query_norm(query);
  SearchUtterance tmp;
  tmp.id = "<anonymous>";
  tmp.embeddings = segments;
  validate_utterance(query, tmp);
  return score_core(query, qn, segments);
}

namespace kernels {

void score_collection_serial(std::span<const double> query,
                             const SearchCollection& collection,
                             std::vector<double>& out) {
  const double qn = validated_query_norm(query);
  for (const SearchUtterance& utt : collection) validate_utterance(query, utt);
  out.resize(collection.size());
  for (std::size_t i = 0; i < collection.size(); ++i) {
    out[i] = score_core(query, qn, collection[i].embeddings);
  }
}

void score_collection_parallel(std::span<const double> query,
                               const SearchCollection& collection,
                               std::vector<double>& out) {
  // All throwing validation happens before the parallel region; the scoring
  // body itself cannot throw. Each output element is written by exactly one
  // iteration, so the result is bit-identical to the serial variant.
  const double qn = validated_query_norm(query);
  for (const SearchUtterance& utt : collection) validate_utterance(query, utt);
  out.resize(collection.size());
  parallel_for(static_cast<std::ptrdiff_t>(collection.size()),
               [&](std::ptrdiff_t i) {
                 out[static_cast<std::size_t>(i)] = score_core(
                     query, qn, collection[static_cast<std::size_t>(i)].embeddings);
               });
}

}  // namespace kernels

std::vector<ScoredUtterance> rank_collection(
    std::span<const double> query, const SearchCollection& collection) {
  if (collection.empty()) throw DataError("cannot rank an empty collection");
  std::vector<double> scores;
  kernels::score_collection_parallel(query, collection, scores);
  std::vector<std::size_t> order(collection.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (collection[a].id != collection[b].id)
      return collection[a].id < collection[b].id;
    return a < b;
  });
  std::vector<ScoredUtterance> ranked;
  ranked.reserve(order.size());
  for (std::size_t i : order) {
    ranked.push_back({collection[i].id, scores[i]});
  }
  return ranked;
}

double equal_error_rate(std::span<const double> relevant_scores,
                        std::span<const double> nonrelevant_scores) {
  if (relevant_scores.empty()) {
    throw DataError("equal_error_rate: no relevant scores");
  }
  if (nonrelevant_scores.empty()) {
    throw DataError("equal_error_rate: no non-relevant scores");
  }
  if (!all_finite(relevant_scores) || !all_finite(nonrelevant_scores)) {
    throw NumericError("equal_error_rate: non-finite score");
  }
  std::vector<double> rel(relevant_scores.begin(), relevant_scores.end());
  std::vector<double> non(nonrelevant_scores.begin(), nonrelevant_scores.end());
  std::sort(rel.begin(), rel.end());
  std::sort(non.begin(), non.end());
  std::vector<double> thetas;
  thetas.reserve(rel.size() + non.size());
  std::merge(rel.begin(), rel.end(), non.begin(), non.end(),
             std::back_inserter(thetas));
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());

  const double nr = static_cast<double>(rel.size());
  const double nn = static_cast<double>(non.size());
  // theta = -inf accepts everything: FAR 1, FRR 0, so FAR > FRR holds at the
  // start and FAR <= FRR holds at theta beyond the last score; the sweep
  // below always finds the crossing.
  double prev_far = 1.0;
  double prev_frr = 0.0;
  for (double theta : thetas) {
    const double far =
        static_cast<double>(non.end() -
                            std::lower_bound(non.begin(), non.end(), theta)) /
        nn;
    const double frr =
        static_cast<double>(std::lower_bound(rel.begin(), rel.end(), theta) -
                            rel.begin()) /
        nr;
    if (far > frr) {
      prev_far = far;
      prev_frr = frr;
      continue;
    }
    // Crossing between the previous and current operating point. The
    // denominator is positive: prev_far > prev_frr and frr >= far.
    const double s =
        (prev_far - prev_frr) / ((prev_far - prev_frr) + (frr - far));
    return prev_far + s * (far - prev_far);
  }
  // Rejecting everything gives FAR 0, FRR 1.
  const double s = (prev_far - prev_frr) / ((prev_far - prev_frr) + 1.0);
  return prev_far + s * (0.0 - prev_far);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
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

}  // namespace

QbEJudgments load_judgments_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open judgments file: " + path);
  QbEJudgments judgments;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    if (lineno == 1 && line.rfind("keyword,", 0) == 0) continue;  // header
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 3) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected 3 comma-separated fields");
    }
    const char* begin = f[2].c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0') {
      throw DataError(path + ":" + std::to_string(lineno) + ": bad vote count '" +
                      f[2] + "'");
    }
    if (v < 0 || v > judgments.n_annotators) {
      throw DataError(path + ":" + std::to_string(lineno) + ": votes " +
                      std::to_string(v) + " outside 0.." +
                      std::to_string(judgments.n_annotators));
    }
    auto [it, fresh] =
        judgments.votes[f[0]].emplace(f[1], static_cast<int>(v));
    if (!fresh) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": duplicate judgment for (" + f[0] + ", " + f[1] + ")");
    }
  }
  if (judgments.votes.empty()) {
    throw DataError("judgments file has no rows: " + path);
  }
  return judgments;
}

void save_judgments_csv(const QbEJudgments& judgments,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write judgments file: " + path);
  out << "keyword,utterance_id,votes\n";
  for (const auto& [keyword, per_utt] : judgments.votes) {
    for (const auto& [utt, v] : per_utt) {
      out << keyword << ',' << utt << ',' << v << '\n';
    }
  }
  if (!out) throw DataError("write failed: " + path);
}

namespace {

struct RankingMetrics {
  double p_at_10 = 0.0;
  double p_at_n = 0.0;
  double eer = 0.0;
  double rho_votes = 0.0;
  std::size_t n_relevant = 0;
};

// Metrics of one ranking against one keyword's judgments. Returns nullopt
// when no ranked utterance is relevant (the keyword is then excluded).
std::optional<RankingMetrics> metrics_for_ranking(
    const std::vector<ScoredUtterance>& ranking,
    const std::map<std::string, int>& kw_votes, const std::string& keyword) {
  if (ranking.empty()) {
    throw DataError("empty ranking for keyword '" + keyword + "'");
  }
  std::vector<double> scores;
  std::vector<double> votes;
  std::vector<bool> relevant;
  scores.reserve(ranking.size());
  votes.reserve(ranking.size());
  relevant.reserve(ranking.size());
  std::size_t n_rel = 0;
  for (const ScoredUtterance& su : ranking) {
    auto it = kw_votes.find(su.id);
    if (it == kw_votes.end()) {
      throw DataError("no relevance judgment for utterance '" + su.id +
                      "' under keyword '" + keyword + "'");
    }
    scores.push_back(su.score);
    votes.push_back(static_cast<double>(it->second));
    const bool rel = it->second >= kRelevanceThreshold;
    relevant.push_back(rel);
    if (rel) ++n_rel;
  }
  if (n_rel == 0) return std::nullopt;
  if (n_rel == ranking.size()) {
    throw DataError("keyword '" + keyword +
                    "' has no non-relevant utterances; EER is undefined");
  }

  RankingMetrics m;
  m.n_relevant = n_rel;
  std::size_t hits10 = 0;
  const std::size_t top10 = std::min<std::size_t>(10, ranking.size());
  for (std::size_t i = 0; i < top10; ++i) {
    if (relevant[i]) ++hits10;
  }
  m.p_at_10 = static_cast<double>(hits10) / 10.0;
  std::size_t hitsn = 0;
  for (std::size_t i = 0; i < n_rel; ++i) {
    if (relevant[i]) ++hitsn;
  }
  m.p_at_n = static_cast<double>(hitsn) / static_cast<double>(n_rel);

  std::vector<double> rel_scores;
  std::vector<double> non_scores;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    (relevant[i] ? rel_scores : non_scores).push_back(scores[i]);
  }
  m.eer = equal_error_rate(rel_scores, non_scores);
  m.rho_votes = spearman_rho(scores, votes);
  return m;
}

void macro_average(QbEResult& result) {
  if (result.per_keyword.empty()) {
    throw DataError("every keyword was excluded; nothing to evaluate");
  }
  const double n = static_cast<double>(result.per_keyword.size());
  for (const auto& [kw, m] : result.per_keyword) {
    result.p_at_10 += m.p_at_10;
    result.p_at_n += m.p_at_n;
    result.eer += m.eer;
    result.rho_votes += m.rho_votes;
  }
  result.p_at_10 /= n;
  result.p_at_n /= n;
  result.eer /= n;
  result.rho_votes /= n;
}

const std::map<std::string, int>& votes_for(const QbEJudgments& judgments,
                                            const std::string& keyword) {
  auto it = judgments.votes.find(keyword);
  if (it == judgments.votes.end()) {
    throw DataError("no judgments for keyword '" + keyword + "'");
  }
  return it->second;
}

}  // namespace

QbEResult qbe_metrics(
    const std::map<std::string, std::vector<ScoredUtterance>>& rankings,
    const QbEJudgments& judgments) {
  if (rankings.empty()) throw DataError("no rankings to evaluate");
  QbEResult result;
  for (const auto& [keyword, ranking] : rankings) {
    const auto m = metrics_for_ranking(ranking, votes_for(judgments, keyword),
                                       keyword);
    if (!m) {
      result.excluded_keywords.push_back(keyword);
      continue;
    }
    KeywordMetrics km;
    km.p_at_10 = m->p_at_10;
    km.p_at_n = m->p_at_n;
    km.eer = m->eer;
    km.rho_votes = m->rho_votes;
    km.n_relevant = m->n_relevant;
    km.n_instances = 1;
    result.per_keyword.emplace(keyword, km);
  }
  macro_average(result);
  return result;
}

std::pair<SearchCollection, std::vector<std::string>> mask_exact_matches(
    const SearchCollection& collection, const std::string& query_class) {
  if (query_class.empty()) {
    throw std::invalid_argument("mask_exact_matches: empty query class");
  }
  SearchCollection masked;
  std::vector<std::string> dropped;
  for (const SearchUtterance& utt : collection) {
    std::vector<std::size_t> keep;
    for (std::size_t s = 0; s < utt.labels.size(); ++s) {
      if (utt.labels[s] != query_class) keep.push_back(s);
    }
    if (keep.empty()) {
      dropped.push_back(utt.id);
      continue;
    }
    if (keep.size() == utt.labels.size()) {
      masked.push_back(utt);
      continue;
    }
    SearchUtterance filtered;
    filtered.id = utt.id;
    filtered.embeddings = Matrix(keep.size(), utt.embeddings.cols());
    for (std::size_t t = 0; t < keep.size(); ++t) {
      filtered.labels.push_back(utt.labels[keep[t]]);
      const auto src = utt.embeddings.row(keep[t]);
      std::copy(src.begin(), src.end(), filtered.embeddings.row(t).begin());
    }
    masked.push_back(std::move(filtered));
  }
  return {std::move(masked), std::move(dropped)};
}

QbEResult run_qbe(
    const std::map<std::string, std::vector<std::vector<double>>>& queries,
    const SearchCollection& collection, const QbEJudgments& judgments,
    bool mask) {
  if (queries.empty()) throw DataError("no query keywords");
  QbEResult result;
  for (const auto& [keyword, instances] : queries) {
    if (instances.empty()) {
      throw DataError("keyword '" + keyword + "' has no query instances");
    }
    const auto& kw_votes = votes_for(judgments, keyword);
    const SearchCollection* searchable = &collection;
    SearchCollection masked;
    if (mask) {
      masked = mask_exact_matches(collection, keyword).first;
      searchable = &masked;
    }
    if (searchable->empty()) {
      result.excluded_keywords.push_back(keyword);
      continue;
    }
    KeywordMetrics km;
    bool excluded = false;
    for (const std::vector<double>& q : instances) {
      const auto ranking = rank_collection(q, *searchable);
      const auto m = metrics_for_ranking(ranking, kw_votes, keyword);
      if (!m) {
        excluded = true;
        break;
      }
      km.p_at_10 += m->p_at_10;
      km.p_at_n += m->p_at_n;
      km.eer += m->eer;
      km.rho_votes += m->rho_votes;
      km.n_relevant = m->n_relevant;
      ++km.n_instances;
    }
    if (excluded) {
      result.excluded_keywords.push_back(keyword);
      continue;
    }
    const double ni = static_cast<double>(km.n_instances);
    km.p_at_10 /= ni;
    km.p_at_n /= ni;
    km.eer /= ni;
    km.rho_votes /= ni;
    result.per_keyword.emplace(keyword, km);
  }
  macro_average(result);
  return result;
}

}  // namespace sawe
