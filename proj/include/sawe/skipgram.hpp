// include/sawe/skipgram.hpp

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

#ifndef SAWE_SKIPGRAM_HPP_
#define SAWE_SKIPGRAM_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sawe/clustering.hpp"
#include "sawe/corpus.hpp"
#include "sawe/matrix.hpp"
#include "sawe/optimizer.hpp"

namespace sawe {

// Log-linear Skipgram over soft pseudo-word labels. The output projection is
// logically d x K; it is stored transposed (W_out is K x d) so that class
// k's weight vector is a contiguous row.
struct SkipgramModel {
  Matrix E;      // K x d input embedding table
  Matrix W_out;  // K x d, row k = column k of the logical d x K projection

  std::size_t k() const { return E.rows(); }
  std::size_t d() const { return E.cols(); }
};

struct SkipgramTrainConfig {
  int epochs = 5;
  int batch_size = 64;
  int d = 100;
  std::uint64_t rng_seed = 42;
  // Per-epoch cap on (shuffled) pairs; 0 trains on every pair. Pair
  // extraction emits all pairs, so any sub-sampling happens here.
  std::size_t max_pairs_per_epoch = 0;
  OptimizerConfig optimizer;
};

struct SkipgramLossGrad {
  double loss = 0.0;
  Matrix dE;      // K x d
  Matrix dW_out;  // K x d
};

// h = E^T v_trg; p = softmax(W^T h); loss = -sum_k v_ctx[k] * log p[k].
// Gradients are the exact analytic derivatives.
SkipgramLossGrad skipgram_loss_grad(const SkipgramModel& model,
                                    const SoftLabel& v_trg,
                                    const SoftLabel& v_ctx);

struct SkipgramTrainResult {
  SkipgramModel model;
  std::vector<double> loss_history;  // mean loss per epoch
};

// Mini-batch training on shuffled pairs. E initialized uniform in
// [-0.5/d, 0.5/d], W zero (initial loss is exactly log K). Single-threaded
// and bit-reproducible given the seed.
SkipgramTrainResult train_skipgram(
    const std::vector<std::pair<SoftLabel, SoftLabel>>& pairs,
    const SkipgramTrainConfig& config);

// z_s = E^T v.
std::vector<double> embed_segment(const SkipgramModel& model,
                                  const SoftLabel& v);

// Mean of embed_segment over each label class. Keys in label order.
std::map<std::string, std::vector<double>> embed_class_average(
    const SegmentedCorpus& corpus, const std::vector<SoftLabel>& soft_labels,
    const SkipgramModel& model);

}  // namespace sawe

#endif  // SAWE_SKIPGRAM_HPP_
