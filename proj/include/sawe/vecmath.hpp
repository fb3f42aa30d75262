// include/sawe/vecmath.hpp

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

#ifndef SAWE_VECMATH_HPP_
#define SAWE_VECMATH_HPP_

#include <cmath>
#include <span>
#include <vector>

#include "sawe/error.hpp"

namespace sawe {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double squared_norm(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Cosine similarity. Throws NumericError if either vector has zero norm.
inline double cosine_similarity(std::span<const double> a,
                                std::span<const double> b) {
  const double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0)
    throw NumericError("cosine similarity undefined for zero-norm vector");
  return dot(a, b) / (na * nb);
}

// Cosine with precomputed norms; used by batch kernels.
inline double cosine_with_norms(std::span<const double> a, double na,
                                std::span<const double> b, double nb) {
  if (na == 0.0 || nb == 0.0)
    throw NumericError("cosine similarity undefined for zero-norm vector");
  return dot(a, b) / (na * nb);
}

inline void axpy(double alpha, std::span<const double> x,
                 std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace sawe

#endif  // SAWE_VECMATH_HPP_
