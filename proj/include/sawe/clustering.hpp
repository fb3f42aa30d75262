// include/sawe/clustering.hpp

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

#ifndef SAWE_CLUSTERING_HPP_
#define SAWE_CLUSTERING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sawe/corpus.hpp"
#include "sawe/matrix.hpp"

namespace sawe {

// Cluster centers in phonetic embedding space plus the soft-label bandwidth.
struct Centroids {
  Matrix means;  // K x D
  double sigma = 0.01;
  bool normalized = true;  // were inputs unit-normalized before clustering

  std::size_t k() const { return means.rows(); }
  std::size_t dim() const { return means.cols(); }
};

struct KmeansResult {
  Matrix centroids;  // K x D
  std::vector<int> assignments;
  double objective = 0.0;
  // Objective after each assign step; non-increasing by construction.
  std::vector<double> objective_history;
  int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding. Empty clusters are re-seeded to
// the point currently farthest from its centroid. Deterministic given the
// seed; results do not depend on the thread count.
KmeansResult kmeans(const Matrix& points, int k, int max_iters, double tol,
                    std::uint64_t seed);

// Best objective over n_restarts independent runs with derived seeds; a tie
// keeps the earliest run. Lloyd's converges to local optima, so production
// clustering should always restart a few times.
KmeansResult kmeans_restarts(const Matrix& points, int k, int max_iters,
                             double tol, std::uint64_t seed, int n_restarts);

// Scales every row to unit Euclidean norm (zero rows are an error).
Matrix unit_normalize_rows(const Matrix& points);

// K-dimensional probability vector expressing a segment's affinity to each
// cluster centroid.
struct SoftLabel {
  std::vector<double> weights;
  std::size_t k() const { return weights.size(); }
};

// softmax(similarities / sigma^2) with max subtraction; invariant under
// adding a constant to all similarities.
SoftLabel soft_labels_from_similarities(std::span<const double> similarities,
                                        double sigma);

// v_k proportional to exp(cos(z, c_k) / sigma^2).
SoftLabel soft_labels(std::span<const double> embedding,
                      const Centroids& centroids);

// Elementwise soft_labels over the corpus, in flat segment order.
std::vector<SoftLabel> soft_labels_batch(const SegmentedCorpus& corpus,
                                         const Centroids& centroids);

// Serial/parallel kernel pair behind kmeans and the batch soft labels; the
// parallel variants are bit-identical to the serial references. Exposed for
// the equivalence tests and the benchmark.
namespace kernels {

// Nearest centroid per point (ties to the lowest index) and the squared
// distance to it.
void assign_nearest_serial(const Matrix& points, const Matrix& centroids,
                           std::vector<int>& assignments,
                           std::vector<double>& dist2);
void assign_nearest_parallel(const Matrix& points, const Matrix& centroids,
                             std::vector<int>& assignments,
                             std::vector<double>& dist2);

// Per-cluster mean of assigned points. Points are bucketed by cluster in
// index order first, so the summation order is fixed for any thread count.
// Clusters with no points keep their previous centroid row.
void accumulate_centroids_serial(const Matrix& points,
                                 const std::vector<int>& assignments,
                                 Matrix& centroids,
                                 std::vector<std::size_t>& counts);
void accumulate_centroids_parallel(const Matrix& points,
                                   const std::vector<int>& assignments,
                                   Matrix& centroids,
                                   std::vector<std::size_t>& counts);

std::vector<SoftLabel> soft_labels_rows_serial(const Matrix& rows,
                                               const Centroids& centroids);
std::vector<SoftLabel> soft_labels_rows_parallel(const Matrix& rows,
                                                 const Centroids& centroids);

}  // namespace kernels

}  // namespace sawe

#endif  // SAWE_CLUSTERING_HPP_
