// bench/bench_kernels.cpp

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

// Times each OpenMP kernel against its serial reference and verifies the
// outputs match bitwise while at it. Usage: bench_kernels [scale] [reps]
// (scale multiplies the problem sizes; defaults keep a laptop run under a
// few seconds).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "sawe/clustering.hpp"
#include "sawe/eval_qbe.hpp"
#include "sawe/parallel.hpp"
#include "sawe/projection.hpp"
#include "sawe/rng.hpp"
#include "sawe/vecmath.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

sawe::Matrix random_matrix(std::size_t rows, std::size_t cols,
                           std::uint64_t seed) {
  sawe::Rng rng(seed);
  sawe::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

bool bitwise_equal(const sawe::Matrix& a, const sawe::Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) return false;
    }
  }
  return true;
}

int failures = 0;

void report(const char* name, double serial_s, double parallel_s, bool equal) {
  std::printf("%-22s serial %8.3f ms   openmp %8.3f ms   speedup %5.2fx   %s\n",
              name, serial_s * 1e3, parallel_s * 1e3,
              parallel_s > 0.0 ? serial_s / parallel_s : 0.0,
              equal ? "bitwise-equal" : "MISMATCH");
  if (!equal) ++failures;
}

template <typename F>
double time_reps(int reps, F&& fn) {
  fn();  // warm up and materialize outputs once
  const auto start = Clock::now();
  for (int r = 0; r < reps; ++r) fn();
  return seconds_since(start) / reps;
}

}  // namespace

int main(int argc, char** argv) {
  const int scale = argc > 1 ? std::atoi(argv[1]) : 1;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
  if (scale < 1 || reps < 1) {
    std::fprintf(stderr, "usage: bench_kernels [scale >= 1] [reps >= 1]\n");
    return 1;
  }
  std::printf("threads: %d, scale: %d, reps: %d\n", sawe::max_threads(), scale,
              reps);

  // chunked_sum
  {
    std::vector<double> values(static_cast<std::size_t>(scale) * 2'000'000);
    sawe::Rng rng(1);
    for (double& v : values) v = rng.normal();
    double s_out = 0.0;
    double p_out = 0.0;
    const double ts =
        time_reps(reps, [&] { s_out = sawe::chunked_sum_serial(values); });
    const double tp =
        time_reps(reps, [&] { p_out = sawe::chunked_sum_parallel(values); });
    report("chunked_sum", ts, tp, s_out == p_out);
  }

  // assign_nearest
  const sawe::Matrix points =
      random_matrix(static_cast<std::size_t>(scale) * 20'000, 32, 2);
  const sawe::Matrix centroids = random_matrix(128, 32, 3);
  std::vector<int> assign_s;
  {
    std::vector<int> a_p;
    std::vector<double> d_s, d_p;
    const double ts = time_reps(reps, [&] {
      sawe::kernels::assign_nearest_serial(points, centroids, assign_s, d_s);
    });
    const double tp = time_reps(reps, [&] {
      sawe::kernels::assign_nearest_parallel(points, centroids, a_p, d_p);
    });
    report("assign_nearest", ts, tp, assign_s == a_p && d_s == d_p);
  }

  // accumulate_centroids
  {
    sawe::Matrix c_s = centroids;
    sawe::Matrix c_p = centroids;
    std::vector<std::size_t> n_s, n_p;
    const double ts = time_reps(reps, [&] {
      c_s = centroids;
      sawe::kernels::accumulate_centroids_serial(points, assign_s, c_s, n_s);
    });
    const double tp = time_reps(reps, [&] {
      c_p = centroids;
      sawe::kernels::accumulate_centroids_parallel(points, assign_s, c_p, n_p);
    });
    report("accumulate_centroids", ts, tp, bitwise_equal(c_s, c_p) && n_s == n_p);
  }

  // soft_labels_rows
  {
    sawe::Centroids cent;
    cent.means = sawe::unit_normalize_rows(centroids);
    cent.sigma = 0.1;
    std::vector<sawe::SoftLabel> l_s, l_p;
    const double ts = time_reps(reps, [&] {
      l_s = sawe::kernels::soft_labels_rows_serial(points, cent);
    });
    const double tp = time_reps(reps, [&] {
      l_p = sawe::kernels::soft_labels_rows_parallel(points, cent);
    });
    bool equal = l_s.size() == l_p.size();
    for (std::size_t i = 0; equal && i < l_s.size(); ++i) {
      equal = l_s[i].weights == l_p[i].weights;
    }
    report("soft_labels_rows", ts, tp, equal);
  }

  // project_rows
  {
    sawe::ProjectionModel model;
    model.W1 = random_matrix(256, 32, 4);
    model.b1.assign(256, 0.01);
    model.W2 = random_matrix(64, 256, 5);
    model.b2.assign(64, 0.0);
    sawe::Matrix z_s, z_p;
    const double ts = time_reps(reps, [&] {
      z_s = sawe::kernels::project_rows_serial(model, points);
    });
    const double tp = time_reps(reps, [&] {
      z_p = sawe::kernels::project_rows_parallel(model, points);
    });
    report("project_rows", ts, tp, bitwise_equal(z_s, z_p));
  }

  // score_collection
  {
    sawe::Rng rng(6);
    sawe::SearchCollection collection;
    for (int u = 0; u < scale * 2'000; ++u) {
      sawe::SearchUtterance utt;
      utt.id = "u" + std::to_string(u);
      const std::size_t segs = 4 + rng.below(8);
      utt.embeddings = random_matrix(segs, 64, 100 + u);
      utt.labels.assign(segs, "");
      collection.push_back(std::move(utt));
    }
    std::vector<double> query(64);
    for (double& q : query) q = rng.normal();
    std::vector<double> s_out, p_out;
    const double ts = time_reps(reps, [&] {
      sawe::kernels::score_collection_serial(query, collection, s_out);
    });
    const double tp = time_reps(reps, [&] {
      sawe::kernels::score_collection_parallel(query, collection, p_out);
    });
    report("score_collection", ts, tp, s_out == p_out);
  }

  if (failures > 0) {
    std::fprintf(stderr, "%d kernel(s) diverged from the serial reference\n",
                 failures);
    return 2;
  }
  return 0;
}
