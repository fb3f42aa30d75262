// include/sawe/synthgen.hpp

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

#ifndef SAWE_SYNTHGEN_HPP_
#define SAWE_SYNTHGEN_HPP_

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sawe/corpus.hpp"
#include "sawe/eval_intrinsic.hpp"
#include "sawe/eval_qbe.hpp"
#include "sawe/matrix.hpp"

namespace sawe {

// Synthetic topic-corpus generator. Word classes live in topics; utterances
// draw a topic and then words from its pool, so classes of one topic
// co-occur. Each segment embedding is its class centroid (a random unit
// vector) plus per-coordinate Gaussian noise and a per-speaker offset.
struct SynthConfig {
  int n_classes = 50;  // V
  int n_topics = 10;   // T
  // Fraction of classes that belong to a second topic as well.
  double topic_overlap = 0.2;
  int n_utterances = 2000;
  int min_length = 4;
  int max_length = 10;
  int phonetic_dim = 32;  // D_p
  // Per-coordinate standard deviation of within-class noise.
  double intra_class_noise = 0.05;
  int speaker_count = 8;
  double speaker_offset_scale = 0.02;
  // Sample utterance words without replacement from the topic pool. The
  // pool must then be at least max_length classes.
  bool distinct_words = false;
  std::uint64_t rng_seed = 42;
};

struct SynthTruth {
  std::vector<std::string> class_names;        // index-aligned, sorted
  std::vector<std::vector<int>> class_topics;  // per class, sorted topic ids
  Matrix centroids;                            // V x D_p
  // Graded semantic ground truth: shared-topic count per class pair.
  Matrix similarity;  // V x V, symmetric
  std::vector<int> utterance_topics;
  QbEJudgments judgments;  // every keyword x every utterance
};

// Deterministic in config.rng_seed, including the regeneration loop that
// retries (with a derived seed) until every class appears in some
// utterance. Throws on invalid or infeasible configs.
std::pair<SegmentedCorpus, SynthTruth> generate(const SynthConfig& config);

// Reference-similarity rows (all unordered class pairs) from the truth.
std::vector<std::tuple<std::string, std::string, double>> reference_rows(
    const SynthTruth& truth);
ReferenceSimilarities reference_similarities(const SynthTruth& truth);

// Writes the three downstream artifacts: corpus JSONL, reference CSV,
// judgments CSV.
void write_synth_files(const SegmentedCorpus& corpus, const SynthTruth& truth,
                       const std::string& corpus_path,
                       const std::string& reference_path,
                       const std::string& judgments_path);

}  // namespace sawe

#endif  // SAWE_SYNTHGEN_HPP_
