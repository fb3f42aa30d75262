// include/sawe/error.hpp

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

#ifndef SAWE_ERROR_HPP_
#define SAWE_ERROR_HPP_

#include <stdexcept>

namespace sawe {

// Problems with input data and files: malformed records, dimension
// mismatches, duplicate or missing ids, truncated binaries.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failures: training divergence, zero variance, zero-norm
// vectors where a cosine is required, rank-deficient input.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sawe

#endif  // SAWE_ERROR_HPP_
