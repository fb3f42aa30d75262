// include/sawe/eval_qbe.hpp

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

#ifndef SAWE_EVAL_QBE_HPP_
#define SAWE_EVAL_QBE_HPP_

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sawe/corpus.hpp"
#include "sawe/matrix.hpp"

namespace sawe {

// One searchable utterance: per-segment embeddings (one row each) plus the
// word-class labels used for exact-match masking ("" when unlabeled).
struct SearchUtterance {
  std::string id;
  std::vector<std::string> labels;
  Matrix embeddings;
};

using SearchCollection = std::vector<SearchUtterance>;

// Pairs corpus structure with an N x D embedding table in flat segment
// order (e.g. the output of the embed stage).
SearchCollection make_collection(const SegmentedCorpus& corpus,
                                 const Matrix& embeddings);

// Detection score of an utterance for a query: the maximum cosine
// similarity over its segments. Throws DataError on an utterance with no
// segments, NumericError on a zero-norm vector.
double score_utterance(std::span<const double> query, const Matrix& segments);

struct ScoredUtterance {
  std::string id;
  double score = 0.0;
  friend bool operator==(const ScoredUtterance&,
                         const ScoredUtterance&) = default;
};

// Every utterance scored and sorted by descending score, ties broken by
// ascending utterance id.
std::vector<ScoredUtterance> rank_collection(std::span<const double> query,
                                             const SearchCollection& collection);

namespace kernels {

// Per-utterance detection scores in collection order. The two variants are
// bit-identical; each output element depends only on its own utterance.
void score_collection_serial(std::span<const double> query,
                             const SearchCollection& collection,
                             std::vector<double>& out);
void score_collection_parallel(std::span<const double> query,
                               const SearchCollection& collection,
                               std::vector<double>& out);

}  // namespace kernels

// Equal error rate of a detector given relevant and non-relevant scores.
// Operating points sweep a threshold theta: FAR(theta) is the fraction of
// non-relevant scores >= theta, FRR(theta) the fraction of relevant scores
// < theta. The EER is read off by linear interpolation between the two
// adjacent operating points bracketing FAR = FRR. Both spans must be
// non-empty.
double equal_error_rate(std::span<const double> relevant_scores,
                        std::span<const double> nonrelevant_scores);

// Crowd-sourced relevance judgments: keyword -> utterance id -> votes in
// 0..n_annotators. An utterance counts as relevant when votes >= 3.
struct QbEJudgments {
  std::map<std::string, std::map<std::string, int>> votes;
  int n_annotators = 5;
};

constexpr int kRelevanceThreshold = 3;

// CSV `keyword,utterance_id,votes`.
QbEJudgments load_judgments_csv(const std::string& path);
void save_judgments_csv(const QbEJudgments& judgments,
                        const std::string& path);

struct KeywordMetrics {
  double p_at_10 = 0.0;
  double p_at_n = 0.0;
  double eer = 0.0;
  double rho_votes = 0.0;
  std::size_t n_relevant = 0;
  int n_instances = 0;
};

struct QbEResult {
  // Macro averages over keywords that have at least one relevant utterance.
  double p_at_10 = 0.0;
  double p_at_n = 0.0;
  double eer = 0.0;
  double rho_votes = 0.0;
  std::map<std::string, KeywordMetrics> per_keyword;
  // Keywords skipped because no searchable utterance is relevant.
  std::vector<std::string> excluded_keywords;
};

// Metrics from one precomputed ranking per keyword.
QbEResult qbe_metrics(
    const std::map<std::string, std::vector<ScoredUtterance>>& rankings,
    const QbEJudgments& judgments);

// Removes segments labeled with the query class; utterances left empty are
// dropped. Returns the filtered collection and the dropped utterance ids.
std::pair<SearchCollection, std::vector<std::string>> mask_exact_matches(
    const SearchCollection& collection, const std::string& query_class);

// Full protocol: each query instance ranks the (optionally masked)
// collection; per-instance metrics are averaged within a keyword, then
// macro-averaged over keywords.
QbEResult run_qbe(
    const std::map<std::string, std::vector<std::vector<double>>>& queries,
    const SearchCollection& collection, const QbEJudgments& judgments,
    bool mask);

}  // namespace sawe

#endif  // SAWE_EVAL_QBE_HPP_
