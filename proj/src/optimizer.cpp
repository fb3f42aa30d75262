// src/optimizer.cpp

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

#include "sawe/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "sawe/error.hpp"

namespace sawe {

Optimizer::Optimizer(const OptimizerConfig& config) : config_(config) {
  if (config_.kind == "adam")
    adam_ = true;
  else if (config_.kind == "sgd")
    adam_ = false;
  else
    throw std::invalid_argument("unknown optimizer kind: " + config_.kind);
  if (!(config_.learning_rate > 0.0))
    throw std::invalid_argument("learning_rate must be positive");
  if (adam_) {
    if (!(config_.beta1 >= 0.0 && config_.beta1 < 1.0) ||
        !(config_.beta2 >= 0.0 && config_.beta2 < 1.0) ||
        !(config_.eps > 0.0))
      throw std::invalid_argument("invalid adam parameters");
  }
}

int Optimizer::add_slot(std::size_t n) {
  Slot slot;
  if (adam_) {
    slot.m.assign(n, 0.0);
    slot.v.assign(n, 0.0);
  }
  slots_.push_back(std::move(slot));
  return static_cast<int>(slots_.size()) - 1;
}

void Optimizer::update(int slot_id, std::span<double> params,
                       std::span<const double> grads) {
  if (params.size() != grads.size())
    throw std::invalid_argument("param/grad size mismatch");
  Slot& slot = slots_.at(static_cast<std::size_t>(slot_id));
  const double lr = config_.learning_rate;
  if (!adam_) {
    for (std::size_t i = 0; i < params.size(); ++i)
      params[i] -= lr * grads[i];
    return;
  }
  if (slot.m.size() != params.size())
    throw std::invalid_argument("slot registered with a different size");
  ++slot.t;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(slot.t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(slot.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    slot.m[i] = b1 * slot.m[i] + (1.0 - b1) * g;
    slot.v[i] = b2 * slot.v[i] + (1.0 - b2) * g * g;
    const double mhat = slot.m[i] / c1;
    const double vhat = slot.v[i] / c2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + config_.eps);
  }
}

}  // namespace sawe
