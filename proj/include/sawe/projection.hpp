// include/sawe/projection.hpp

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

#ifndef SAWE_PROJECTION_HPP_
#define SAWE_PROJECTION_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "sawe/corpus.hpp"
#include "sawe/matrix.hpp"
#include "sawe/optimizer.hpp"

namespace sawe {

// Two-layer feed-forward projection from phonetic to semantic space.
// `rectified` selects max(0, .) between the layers; both modes are supported
// because a purely linear stack is also a valid configuration.
struct ProjectionModel {
  Matrix W1;               // hidden x in
  std::vector<double> b1;  // hidden
  Matrix W2;               // out x hidden
  std::vector<double> b2;  // out
  bool rectified = true;

  std::size_t in_dim() const { return W1.cols(); }
  std::size_t hidden_dim() const { return W1.rows(); }
  std::size_t out_dim() const { return W2.rows(); }
};

struct ContrastiveConfig {
  double tau = 0.1;
  int n_negatives = 20;
  int epochs = 5;
  int batch_size = 64;
  int hidden_dim = 1024;
  int out_dim = 100;
  bool rectified = true;
  int window = 3;  // negative-sampling eligibility window
  std::uint64_t rng_seed = 42;
  std::size_t max_pairs_per_epoch = 0;  // 0 = use every pair
  OptimizerConfig optimizer;
};

// Softmax-over-similarities loss: anchor pulled to the positive, pushed from
// N negatives, temperature tau; sim = cosine, max-subtracted log-sum-exp.
double contrastive_loss(std::span<const double> anchor,
                        std::span<const double> positive,
                        const std::vector<std::vector<double>>& negatives,
                        double tau);

std::vector<double> project(const ProjectionModel& model,
                            std::span<const double> x);

struct ProjectionGrads {
  Matrix dW1;
  std::vector<double> db1;
  Matrix dW2;
  std::vector<double> db2;

  explicit ProjectionGrads(const ProjectionModel& model);
  void zero();
  void scale(double s);
};

// Loss of one (anchor, positive, negatives) instance where every vector is
// first mapped through the network; exact analytic parameter gradients are
// accumulated (+=) into `grads` when non-null.
double projection_pair_loss_grad(
    const ProjectionModel& model, std::span<const double> anchor,
    std::span<const double> positive,
    const std::vector<std::vector<double>>& negatives, double tau,
    ProjectionGrads* grads);

// Seeded fan-in uniform init; biases zero.
ProjectionModel init_projection(int in_dim, const ContrastiveConfig& config);

struct ProjectionTrainResult {
  ProjectionModel model;
  std::vector<double> loss_history;  // mean loss per epoch
};

// Mini-batch training on context pairs; negatives are re-sampled per pair
// from the corpus. Single-threaded and bit-reproducible given the seed.
ProjectionTrainResult train_projection(const SegmentedCorpus& corpus,
                                       const std::vector<ContextPair>& pairs,
                                       const ContrastiveConfig& config);

namespace kernels {

// Row-wise projection of a matrix of phonetic embeddings; the parallel
// variant is bit-identical to the serial one.
Matrix project_rows_serial(const ProjectionModel& model, const Matrix& rows);
Matrix project_rows_parallel(const ProjectionModel& model, const Matrix& rows);

}  // namespace kernels

}  // namespace sawe

#endif  // SAWE_PROJECTION_HPP_
