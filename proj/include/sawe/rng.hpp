// include/sawe/rng.hpp

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

#ifndef SAWE_RNG_HPP_
#define SAWE_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace sawe {

// splitmix64 finalizer, used to mix seeds.
std::uint64_t mix64(std::uint64_t x);

// Derives a per-stage seed from the global seed and a stage name, so that
// all randomness in a pipeline fans out from a single --seed value.
std::uint64_t derive_seed(std::uint64_t base, std::string_view stage);

// Seeded generator with fixed-algorithm draws. std::mt19937_64 is fully
// specified by the standard; the draws below are hand rolled because the
// standard distributions are implementation-defined and would break
// byte-for-byte reproducibility of output files.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t u64() { return engine_(); }

  // Unbiased draw in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  // Uniform in [0, 1) with 53 random bits.
  double real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * real(); }

  // Standard normal via Box-Muller; the second deviate is cached.
  double normal();

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sawe

#endif  // SAWE_RNG_HPP_
