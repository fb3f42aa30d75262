// src/clustering.cpp

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

#include "sawe/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sawe/error.hpp"
#include "sawe/parallel.hpp"
#include "sawe/rng.hpp"
#include "sawe/vecmath.hpp"

namespace sawe {

namespace kernels {

namespace {

inline void assign_one(const Matrix& points, const Matrix& centroids,
                       std::size_t i, std::vector<int>& assignments,
                       std::vector<double>& dist2) {
  const std::size_t k = centroids.rows();
  std::span<const double> p = points.row(i);
  int best = 0;
  double best_d2 = squared_distance(p, centroids.row(0));
  for (std::size_t c = 1; c < k; ++c) {
    double d2 = squared_distance(p, centroids.row(c));
    if (d2 < best_d2) {
      best_d2 = d2;
      best = static_cast<int>(c);
    }
  }
  assignments[i] = best;
  dist2[i] = best_d2;
}

}  // namespace

void assign_nearest_serial(const Matrix& points, const Matrix& centroids,
                           std::vector<int>& assignments,
                           std::vector<double>& dist2) {
  const std::size_t n = points.rows();
  assignments.resize(n);
  dist2.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    assign_one(points, centroids, i, assignments, dist2);
}

void assign_nearest_parallel(const Matrix& points, const Matrix& centroids,
                             std::vector<int>& assignments,
                             std::vector<double>& dist2) {
  const std::size_t n = points.rows();
  assignments.resize(n);
  dist2.resize(n);
  parallel_for(n, [&](std::size_t i) {
    assign_one(points, centroids, i, assignments, dist2);
  });
}

namespace {

// Bucket point indices by cluster (counting sort, stable in point order),
// then sum each bucket sequentially. The summation order per cluster is
// therefore independent of how the bucketing work was scheduled.
void bucket_by_cluster(const std::vector<int>& assignments, std::size_t k,
                       std::vector<std::size_t>& offsets,
                       std::vector<std::size_t>& order) {
  const std::size_t n = assignments.size();
  offsets.assign(k + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    ++offsets[static_cast<std::size_t>(assignments[i]) + 1];
  for (std::size_t c = 0; c < k; ++c) offsets[c + 1] += offsets[c];
  order.resize(n);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < n; ++i)
    order[cursor[static_cast<std::size_t>(assignments[i])]++] = i;
}

inline void sum_bucket(const Matrix& points,
                       const std::vector<std::size_t>& offsets,
                       const std::vector<std::size_t>& order, std::size_t c,
                       Matrix& centroids, std::vector<std::size_t>& counts) {
  const std::size_t d = points.cols();
  const std::size_t begin = offsets[c];
  const std::size_t end = offsets[c + 1];
  counts[c] = end - begin;
  if (begin == end) return;  // empty cluster: keep the previous centroid
  double* out = &centroids(c, 0);
  std::fill(out, out + d, 0.0);
  for (std::size_t t = begin; t < end; ++t) {
    const double* p = points.row(order[t]).data();
    for (std::size_t j = 0; j < d; ++j) out[j] += p[j];
  }
  const double inv = 1.0 / static_cast<double>(end - begin);
  for (std::size_t j = 0; j < d; ++j) out[j] *= inv;
}

}  // namespace

void accumulate_centroids_serial(const Matrix& points,
                                 const std::vector<int>& assignments,
                                 Matrix& centroids,
                                 std::vector<std::size_t>& counts) {
  const std::size_t k = centroids.rows();
  counts.assign(k, 0);
  std::vector<std::size_t> offsets, order;
  bucket_by_cluster(assignments, k, offsets, order);
  for (std::size_t c = 0; c < k; ++c)
    sum_bucket(points, offsets, order, c, centroids, counts);
}

void accumulate_centroids_parallel(const Matrix& points,
                                   const std::vector<int>& assignments,
                                   Matrix& centroids,
                                   std::vector<std::size_t>& counts) {
  const std::size_t k = centroids.rows();
  counts.assign(k, 0);
  std::vector<std::size_t> offsets, order;
  bucket_by_cluster(assignments, k, offsets, order);
  parallel_for(k, [&](std::size_t c) {
    sum_bucket(points, offsets, order, c, centroids, counts);
  });
}

namespace {

inline SoftLabel soft_label_one(std::span<const double> row,
                                const Centroids& centroids,
                                const std::vector<double>& centroid_norms,
                                double row_norm) {
  const std::size_t k = centroids.k();
  const double inv_s2 = 1.0 / (centroids.sigma * centroids.sigma);
  SoftLabel lab;
  lab.weights.resize(k);
  double max_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    double cs = cosine_with_norms(row, row_norm, centroids.means.row(c),
                                  centroid_norms[c]);
    double s = cs * inv_s2;
    lab.weights[c] = s;
    if (s > max_score) max_score = s;
  }
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    lab.weights[c] = std::exp(lab.weights[c] - max_score);
    total += lab.weights[c];
  }
  const double inv_total = 1.0 / total;
  for (std::size_t c = 0; c < k; ++c) lab.weights[c] *= inv_total;
  return lab;
}

std::vector<double> row_norms(const Matrix& m, const char* what) {
  std::vector<double> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out[i] = norm(m.row(i));
    if (out[i] == 0.0)
      throw NumericError(std::string("zero-norm ") + what + " row " +
                         std::to_string(i));
  }
  return out;
}

}  // namespace

std::vector<SoftLabel> soft_labels_rows_serial(const Matrix& rows,
                                               const Centroids& centroids) {
  if (rows.cols() != centroids.dim())
    throw DataError("soft labels: dim mismatch (rows " +
                    std::to_string(rows.cols()) + ", centroids " +
                    std::to_string(centroids.dim()) + ")");
  std::vector<double> cnorms = row_norms(centroids.means, "centroid");
  std::vector<SoftLabel> out(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    double rn = norm(rows.row(i));
    if (rn == 0.0)
      throw NumericError("zero-norm embedding row " + std::to_string(i));
    out[i] = soft_label_one(rows.row(i), centroids, cnorms, rn);
  }
  return out;
}

std::vector<SoftLabel> soft_labels_rows_parallel(const Matrix& rows,
                                                 const Centroids& centroids) {
  if (rows.cols() != centroids.dim())
    throw DataError("soft labels: dim mismatch (rows " +
                    std::to_string(rows.cols()) + ", centroids " +
                    std::to_string(centroids.dim()) + ")");
  std::vector<double> cnorms = row_norms(centroids.means, "centroid");
  const std::size_t n = rows.rows();
  std::vector<double> rnorms(n);
  std::vector<SoftLabel> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    rnorms[i] = norm(rows.row(i));
    if (rnorms[i] == 0.0)
      throw NumericError("zero-norm embedding row " + std::to_string(i));
  }
  parallel_for(n, [&](std::size_t i) {
    out[i] = soft_label_one(rows.row(i), centroids, cnorms, rnorms[i]);
  });
  return out;
}

}  // namespace kernels

Matrix unit_normalize_rows(const Matrix& points) {
  Matrix out = points;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    double n = norm(out.row(i));
    if (n == 0.0)
      throw NumericError("cannot normalize zero-norm row " +
                         std::to_string(i));
    double inv = 1.0 / n;
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= inv;
  }
  return out;
}

namespace {

// k-means++: first center uniform, then each next center drawn with
// probability proportional to squared distance from the nearest chosen one.
Matrix seed_centroids(const Matrix& points, int k, Rng& rng) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  Matrix centroids(static_cast<std::size_t>(k), d);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  std::size_t first = static_cast<std::size_t>(rng.below(n));
  std::copy_n(points.row(first).data(), d, &centroids(0, 0));

  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double dd = squared_distance(points.row(i),
                                   centroids.row(static_cast<std::size_t>(c) - 1));
      if (dd < d2[i]) d2[i] = dd;
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double r = rng.real() * total;
      double acc = 0.0;
      pick = n - 1;  // guard against round-off leaving r unconsumed
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (r < acc) {
          pick = i;
          break;
        }
      }
    } else {
      // All points coincide with chosen centers; any pick is a duplicate.
      pick = static_cast<std::size_t>(rng.below(n));
    }
    std::copy_n(points.row(pick).data(), d, &centroids(static_cast<std::size_t>(c), 0));
  }
  return centroids;
}

}  // namespace

KmeansResult kmeans(const Matrix& points, int k, int max_iters, double tol,
                    std::uint64_t seed) {
  const std::size_t n = points.rows();
  if (k <= 0) throw std::invalid_argument("kmeans: k must be positive");
  if (max_iters <= 0)
    throw std::invalid_argument("kmeans: max_iters must be positive");
  if (tol < 0.0) throw std::invalid_argument("kmeans: tol must be >= 0");
  if (n == 0) throw DataError("kmeans: no points");
  if (static_cast<std::size_t>(k) > n)
    throw DataError("kmeans: k (" + std::to_string(k) +
                    ") exceeds point count (" + std::to_string(n) + ")");
  if (!all_finite(points.flat()))
    throw NumericError("kmeans: non-finite input point");

  Rng rng(derive_seed(seed, "kmeans"));
  KmeansResult res;
  res.centroids = seed_centroids(points, k, rng);

  std::vector<double> dist2;
  std::vector<std::size_t> counts;
  std::vector<int> prev_assignments;

  kernels::assign_nearest_parallel(points, res.centroids, res.assignments,
                                   dist2);
  double obj = chunked_sum_parallel(dist2);
  res.objective_history.push_back(obj);

  for (int it = 0; it < max_iters; ++it) {
    res.iterations = it + 1;
    prev_assignments = res.assignments;

    kernels::accumulate_centroids_parallel(points, res.assignments,
                                           res.centroids, counts);

    // Re-seed each empty cluster at the point farthest from its centroid
    // (claimed points excluded so two re-seeds never collide). The stale row
    // carried no points, so the recorded objective stays non-increasing.
    bool reseeded = false;
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c)
      if (counts[c] == 0) reseeded = true;
    if (reseeded) {
      std::vector<int> scratch_assign;
      std::vector<double> scratch_d2;
      kernels::assign_nearest_parallel(points, res.centroids, scratch_assign,
                                       scratch_d2);
      std::vector<bool> claimed(n, false);
      for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
        if (counts[c] != 0) continue;
        std::size_t far = n;
        double far_d2 = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (claimed[i]) continue;
          if (scratch_d2[i] > far_d2) {
            far_d2 = scratch_d2[i];
            far = i;
          }
        }
        if (far == n)
          throw NumericError("kmeans: cannot re-seed empty cluster");
        claimed[far] = true;
        std::copy_n(points.row(far).data(), points.cols(),
                    &res.centroids(c, 0));
      }
    }

    kernels::assign_nearest_parallel(points, res.centroids, res.assignments,
                                     dist2);
    double new_obj = chunked_sum_parallel(dist2);
    res.objective_history.push_back(new_obj);
    const double decrease = obj - new_obj;
    obj = new_obj;

    if (res.assignments == prev_assignments) break;  // Lloyd fixpoint
    if (!reseeded && decrease < tol) break;
  }

  res.objective = obj;
  return res;
}

KmeansResult kmeans_restarts(const Matrix& points, int k, int max_iters,
                             double tol, std::uint64_t seed, int n_restarts) {
  if (n_restarts <= 0)
    throw std::invalid_argument("kmeans: n_restarts must be positive");
  KmeansResult best;
  for (int r = 0; r < n_restarts; ++r) {
    KmeansResult run = kmeans(points, k, max_iters, tol,
                              derive_seed(seed, "restart-" + std::to_string(r)));
    if (r == 0 || run.objective < best.objective) best = std::move(run);
  }
  return best;
}

SoftLabel soft_labels_from_similarities(std::span<const double> similarities,
                                        double sigma) {
  if (similarities.empty())
    throw std::invalid_argument("soft labels: no similarities");
  if (!(sigma > 0.0))
    throw std::invalid_argument("soft labels: sigma must be positive");
  const double inv_s2 = 1.0 / (sigma * sigma);
  SoftLabel lab;
  lab.weights.resize(similarities.size());
  double max_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < similarities.size(); ++c) {
    lab.weights[c] = similarities[c] * inv_s2;
    if (lab.weights[c] > max_score) max_score = lab.weights[c];
  }
  double total = 0.0;
  for (double& w : lab.weights) {
    w = std::exp(w - max_score);
    total += w;
  }
  const double inv_total = 1.0 / total;
  for (double& w : lab.weights) w *= inv_total;
  return lab;
}

SoftLabel soft_labels(std::span<const double> embedding,
                      const Centroids& centroids) {
  if (embedding.size() != centroids.dim())
    throw DataError("soft labels: embedding dim " +
                    std::to_string(embedding.size()) + " != centroid dim " +
                    std::to_string(centroids.dim()));
  std::vector<double> sims(centroids.k());
  for (std::size_t c = 0; c < centroids.k(); ++c)
    sims[c] = cosine_similarity(embedding, centroids.means.row(c));
  return soft_labels_from_similarities(sims, centroids.sigma);
}

std::vector<SoftLabel> soft_labels_batch(const SegmentedCorpus& corpus,
                                         const Centroids& centroids) {
  Matrix rows = corpus.embedding_matrix();
  return kernels::soft_labels_rows_parallel(rows, centroids);
}

}  // namespace sawe
