// include/sawe/pca.hpp

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

#ifndef SAWE_PCA_HPP_
#define SAWE_PCA_HPP_

#include <vector>

#include "sawe/matrix.hpp"

namespace sawe {

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j pairs with values[j]
};

// Cyclic Jacobi rotations for a symmetric matrix. Exact in the sense of
// iterating until the off-diagonal mass reaches machine precision;
// deterministic, no randomness involved.
EigenDecomposition jacobi_eigensymm(const Matrix& a);

struct PcaResult {
  std::vector<double> mean;       // column means of the input
  Matrix components;              // 2 x D, orthonormal rows, descending
  std::vector<double> variances;  // top-2 eigenvalues of sample covariance
  Matrix projected;               // N x 2
  // Second eigenvalue vanishes relative to the first (collinear input).
  bool rank_deficient = false;
};

// Top-2 principal components via full eigendecomposition of the sample
// covariance (normalized by N - 1). Component signs are fixed by making
// each one's largest-magnitude coordinate positive. Throws DataError for
// fewer than 2 points or dimensions, NumericError when the covariance has
// rank 0 (all points identical).
PcaResult pca_top2(const Matrix& points);

}  // namespace sawe

#endif  // SAWE_PCA_HPP_
