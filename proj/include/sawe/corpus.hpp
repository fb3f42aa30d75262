// include/sawe/corpus.hpp

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

#ifndef SAWE_CORPUS_HPP_
#define SAWE_CORPUS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sawe/matrix.hpp"
#include "sawe/rng.hpp"

namespace sawe {

// One spoken word segment with its precomputed phonetic embedding.
struct Segment {
  std::string id;
  int position = 0;
  std::optional<std::string> label;  // word class, evaluation only
  std::vector<double> embedding;
};

struct Utterance {
  std::string id;
  std::string speaker;
  std::vector<Segment> segments;
};

// Reference to one segment as (utterance index, position).
struct SegmentRef {
  std::uint32_t utterance = 0;
  std::uint32_t position = 0;
  friend bool operator==(const SegmentRef&, const SegmentRef&) = default;
};

// A (target, context) pair of word segments co-occurring within the
// context window of the same utterance.
struct ContextPair {
  SegmentRef target;
  SegmentRef context;
  friend bool operator==(const ContextPair&, const ContextPair&) = default;
};

// Immutable once constructed; all invariants (unique ids, consistent
// embedding dimension, contiguous positions) are checked at build time.
class SegmentedCorpus {
 public:
  SegmentedCorpus() = default;

  // Validates every invariant; throws DataError with the offending id.
  static SegmentedCorpus FromUtterances(std::vector<Utterance> utterances);

  const std::vector<Utterance>& utterances() const { return utterances_; }
  int dim() const { return dim_; }
  std::size_t num_utterances() const { return utterances_.size(); }
  std::size_t num_segments() const { return total_segments_; }

  const Segment& at(SegmentRef ref) const {
    return utterances_[ref.utterance].segments[ref.position];
  }

  // Flat enumeration order: utterance order, then position. This order is
  // the canonical one for embedding files and soft-label batches.
  std::size_t flat_index(SegmentRef ref) const {
    return offsets_[ref.utterance] + ref.position;
  }
  SegmentRef ref_at(std::size_t flat) const;

  // All phonetic embeddings as an N x D matrix in flat order.
  Matrix embedding_matrix() const;

  // Segment ids in flat order.
  std::vector<std::string> segment_ids() const;

  bool has_labels() const { return has_labels_; }

 private:
  std::vector<Utterance> utterances_;
  std::vector<std::size_t> offsets_;  // per-utterance flat offset
  std::size_t total_segments_ = 0;
  int dim_ = 0;
  bool has_labels_ = false;
};

// JSON-lines corpus file, one utterance per line. Parse errors report the
// line number; invariant violations report the offending id.
SegmentedCorpus load_corpus(const std::string& path);
void save_corpus(const SegmentedCorpus& corpus, const std::string& path);

// Every ordered pair of distinct positions (i, j) with |i - j| <= window,
// in deterministic order: utterance order, then i, then j.
std::vector<ContextPair> extract_context_pairs(const SegmentedCorpus& corpus,
                                               int window);

// Uniform sample, with replacement, from all segments that are neither the
// anchor nor inside the anchor's +/- window in its own utterance.
std::vector<SegmentRef> sample_negatives(const SegmentedCorpus& corpus,
                                         SegmentRef anchor, int window,
                                         int count, Rng& rng);
std::vector<SegmentRef> sample_negatives(const SegmentedCorpus& corpus,
                                         SegmentRef anchor, int window,
                                         int count, std::uint64_t seed);

}  // namespace sawe

#endif  // SAWE_CORPUS_HPP_
