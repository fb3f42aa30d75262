// include/sawe/parallel.hpp

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

#ifndef SAWE_PARALLEL_HPP_
#define SAWE_PARALLEL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sawe {

// Every parallel kernel in this library is structured so that its result is
// bit-identical to the serial reference for any thread count: work is
// partitioned over independent outputs, and cross-element reductions use a
// fixed chunk size with partials combined in chunk-index order.

int max_threads();
void set_num_threads(int n);

// Chunk size for deterministic reductions. Fixed, never thread-dependent.
inline constexpr std::size_t kReduceChunk = 1024;

template <typename F>
void parallel_for(std::ptrdiff_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
#else
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
#endif
}

// Sum of `values` using fixed-size chunk partials combined left to right.
// The serial and parallel variants produce identical bits; only the partial
// computation is parallelized.
double chunked_sum_serial(std::span<const double> values);
double chunked_sum_parallel(std::span<const double> values);

}  // namespace sawe

#endif  // SAWE_PARALLEL_HPP_
