// src/parallel.cpp

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

#include "sawe/parallel.hpp"

namespace sawe {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_num_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

namespace {

inline double sum_chunk(std::span<const double> values, std::size_t begin,
                        std::size_t end) {
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += values[i];
  return s;
}

}  // namespace

double chunked_sum_serial(std::span<const double> values) {
  const std::size_t n = values.size();
  const std::size_t chunks = (n + kReduceChunk - 1) / kReduceChunk;
  double total = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t b = c * kReduceChunk;
    total += sum_chunk(values, b, std::min(n, b + kReduceChunk));
  }
  return total;
}

double chunked_sum_parallel(std::span<const double> values) {
  const std::size_t n = values.size();
  const std::size_t chunks = (n + kReduceChunk - 1) / kReduceChunk;
  std::vector<double> partial(chunks, 0.0);
  parallel_for(static_cast<std::ptrdiff_t>(chunks), [&](std::ptrdiff_t c) {
    const std::size_t b = static_cast<std::size_t>(c) * kReduceChunk;
    partial[static_cast<std::size_t>(c)] =
        sum_chunk(values, b, std::min(n, b + kReduceChunk));
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace sawe
