// src/pca.cpp

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

#include "sawe/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sawe/error.hpp"
#include "sawe/vecmath.hpp"

namespace sawe {

EigenDecomposition jacobi_eigensymm(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) {
    throw std::invalid_argument("jacobi: matrix must be square and non-empty");
  }
  if (!all_finite(a.flat())) throw NumericError("jacobi: non-finite entry");
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * std::max(scale, 1.0)) {
        throw std::invalid_argument("jacobi: matrix is not symmetric");
      }
    }
  }

  Matrix work = a;
  Matrix vecs(n, n);
  for (std::size_t i = 0; i < n; ++i) vecs(i, i) = 1.0;

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += work(p, q) * work(p, q);
    }
    if (off == 0.0) break;
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = work(p, q);
        if (apq == 0.0) continue;
        // Entry already negligible against its diagonal: flush to zero.
        const double g = 100.0 * std::abs(apq);
        if (std::abs(work(p, p)) + g == std::abs(work(p, p)) &&
            std::abs(work(q, q)) + g == std::abs(work(q, q))) {
          work(p, q) = 0.0;
          work(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const double theta = (work(q, q) - work(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = work(r, p);
          const double arq = work(r, q);
          work(r, p) = arp - s * (arq + tau * arp);
          work(p, r) = work(r, p);
          work(r, q) = arq + s * (arp - tau * arq);
          work(q, r) = work(r, q);
        }
        work(p, p) -= t * apq;
        work(q, q) += t * apq;
        work(p, q) = 0.0;
        work(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = vecs(r, p);
          const double vrq = vecs(r, q);
          vecs(r, p) = vrp - s * (vrq + tau * vrp);
          vecs(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
    if (!rotated) break;
  }
  double off = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) off += work(p, q) * work(p, q);
  }
  if (!(off <= 1e-18 * std::max(scale * scale, 1.0))) {
    throw NumericError("jacobi: did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (work(x, x) != work(y, y)) return work(x, x) > work(y, y);
    return x < y;
  });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = work(order[j], order[j]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, j) = vecs(r, order[j]);
  }
  return out;
}

PcaResult pca_top2(const Matrix& points) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  if (n < 2) throw DataError("pca: need at least 2 points");
  if (d < 2) throw DataError("pca: need at least 2 dimensions");
  if (!all_finite(points.flat())) throw NumericError("pca: non-finite input");

  PcaResult result;
  result.mean.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = points.row(r);
    for (std::size_t j = 0; j < d; ++j) result.mean[j] += row[j];
  }
  for (double& m : result.mean) m /= static_cast<double>(n);

  Matrix centered(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      centered(r, j) = points(r, j) - result.mean[j];
    }
  }
  // Sample covariance; the upper triangle is mirrored so the matrix is
  // symmetric to the bit.
  Matrix cov(d, d);
  const double inv = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += centered(r, i) * centered(r, j);
      cov(i, j) = s * inv;
      cov(j, i) = cov(i, j);
    }
  }
  double trace = 0.0;
  for (std::size_t i = 0; i < d; ++i) trace += cov(i, i);
  if (trace == 0.0) {
    throw NumericError("pca: covariance has rank 0 (all points identical)");
  }

  const EigenDecomposition eig = jacobi_eigensymm(cov);
  result.variances = {eig.values[0], eig.values[1]};
  result.rank_deficient =
      eig.values[1] <= 1e-12 * std::max(eig.values[0], 0.0);

  result.components = Matrix(2, d);
  for (std::size_t c = 0; c < 2; ++c) {
    std::size_t arg = 0;
    for (std::size_t j = 1; j < d; ++j) {
      if (std::abs(eig.vectors(j, c)) > std::abs(eig.vectors(arg, c))) arg = j;
    }
    const double flip = eig.vectors(arg, c) < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      result.components(c, j) = flip * eig.vectors(j, c);
    }
  }

  result.projected = Matrix(n, 2);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      result.projected(r, c) = dot(centered.row(r), result.components.row(c));
    }
  }
  return result;
}

}  // namespace sawe
