// include/sawe/optimizer.hpp

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

#ifndef SAWE_OPTIMIZER_HPP_
#define SAWE_OPTIMIZER_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sawe {

struct OptimizerConfig {
  std::string kind = "adam";  // "sgd" | "adam"
  double learning_rate = 1e-3;
  // Adam moments; ignored by sgd.
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First-order optimizer over flat parameter blocks. Each tensor registers a
// slot once; per-slot Adam state lives inside the optimizer so callers keep
// plain Matrix/vector parameters.
class Optimizer {
 public:
  explicit Optimizer(const OptimizerConfig& config);

  // Registers a parameter block of `n` values; returns its slot id.
  int add_slot(std::size_t n);

  // One update step: params -= lr * (grads or the Adam-scaled direction).
  void update(int slot, std::span<double> params,
              std::span<const double> grads);

  const OptimizerConfig& config() const { return config_; }

 private:
  struct Slot {
    std::vector<double> m, v;  // Adam moments; empty for sgd
    std::int64_t t = 0;
  };
  OptimizerConfig config_;
  bool adam_ = false;
  std::vector<Slot> slots_;
};

}  // namespace sawe

#endif  // SAWE_OPTIMIZER_HPP_
