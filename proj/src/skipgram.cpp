// src/skipgram.cpp

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

#include "sawe/skipgram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sawe/error.hpp"
#include "sawe/rng.hpp"
#include "sawe/vecmath.hpp"

namespace sawe {

namespace {

void check_label(const SoftLabel& v, std::size_t k, const char* name) {
  if (v.k() != k)
    throw DataError(std::string(name) + " has K=" + std::to_string(v.k()) +
                    ", model expects K=" + std::to_string(k));
}

// Shared forward/backward core. Gradients are accumulated (+=) into the
// provided K x d buffers so the training loop can sum over a batch without
// materializing per-pair matrices.
double loss_grad_accumulate(const SkipgramModel& model, const SoftLabel& v_trg,
                            const SoftLabel& v_ctx, Matrix& dE,
                            Matrix& dW_out) {
  const std::size_t K = model.k();
  const std::size_t d = model.d();

  // h = E^T v_trg. Soft labels are near-one-hot at small sigma; zero
  // weights are skipped, which is exact.
  std::vector<double> h(d, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const double w = v_trg.weights[k];
    if (w == 0.0) continue;
    axpy(w, model.E.row(k), h);
  }

  // p = softmax(W^T h) with max subtraction.
  std::vector<double> p(K);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < K; ++k) {
    p[k] = dot(model.W_out.row(k), h);
    if (p[k] > max_logit) max_logit = p[k];
  }
  double z = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    p[k] = std::exp(p[k] - max_logit);
    z += p[k];
  }
  const double inv_z = 1.0 / z;
  for (std::size_t k = 0; k < K; ++k) p[k] *= inv_z;

  // loss = -sum_k v_ctx[k] log p[k].
  double loss = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double w = v_ctx.weights[k];
    if (w == 0.0) continue;
    loss -= w * std::log(p[k]);
  }

  // dlogits = p - v_ctx; dW_out[k] = dlogits[k] * h; dh = sum_k dlogits[k] *
  // W_out[k]; dE[k] = v_trg[k] * dh.
  std::vector<double> dh(d, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const double g = p[k] - v_ctx.weights[k];
    if (g != 0.0) {
      axpy(g, h, dW_out.row(k));
      axpy(g, model.W_out.row(k), dh);
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    const double w = v_trg.weights[k];
    if (w == 0.0) continue;
    axpy(w, dh, dE.row(k));
  }
  return loss;
}

}  // namespace

SkipgramLossGrad skipgram_loss_grad(const SkipgramModel& model,
                                    const SoftLabel& v_trg,
                                    const SoftLabel& v_ctx) {
  if (model.E.rows() != model.W_out.rows() ||
      model.E.cols() != model.W_out.cols())
    throw DataError("skipgram model E/W shape mismatch");
  check_label(v_trg, model.k(), "v_trg");
  check_label(v_ctx, model.k(), "v_ctx");
  if (!all_finite(model.E.flat()) || !all_finite(model.W_out.flat()))
    throw NumericError("skipgram model has non-finite parameters");

  SkipgramLossGrad out;
  out.dE = Matrix(model.k(), model.d());
  out.dW_out = Matrix(model.k(), model.d());
  out.loss = loss_grad_accumulate(model, v_trg, v_ctx, out.dE, out.dW_out);
  return out;
}

SkipgramTrainResult train_skipgram(
    const std::vector<std::pair<SoftLabel, SoftLabel>>& pairs,
    const SkipgramTrainConfig& config) {
  if (pairs.empty()) throw DataError("train_skipgram: no training pairs");
  if (config.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (config.batch_size <= 0)
    throw std::invalid_argument("batch_size must be positive");
  if (config.d <= 0) throw std::invalid_argument("d must be positive");

  const std::size_t K = pairs.front().first.k();
  for (const auto& [trg, ctx] : pairs) {
    check_label(trg, K, "v_trg");
    check_label(ctx, K, "v_ctx");
  }
  const std::size_t d = static_cast<std::size_t>(config.d);

  SkipgramTrainResult res;
  res.model.E = Matrix(K, d);
  res.model.W_out = Matrix(K, d);  // zero W: initial loss is exactly log K
  Rng rng(derive_seed(config.rng_seed, "skipgram"));
  const double half = 0.5 / static_cast<double>(d);
  for (double& v : res.model.E.flat()) v = rng.uniform(-half, half);

  Optimizer opt(config.optimizer);
  const int slot_e = opt.add_slot(K * d);
  const int slot_w = opt.add_slot(K * d);

  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t per_epoch =
      config.max_pairs_per_epoch == 0
          ? pairs.size()
          : std::min(config.max_pairs_per_epoch, pairs.size());

  Matrix dE(K, d), dW(K, d);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t done = 0;
    int batch_no = 0;
    while (done < per_epoch) {
      const std::size_t batch =
          std::min(static_cast<std::size_t>(config.batch_size),
                   per_epoch - done);
      dE.fill(0.0);
      dW.fill(0.0);
      double batch_loss = 0.0;
      for (std::size_t b = 0; b < batch; ++b) {
        const auto& [trg, ctx] = pairs[order[done + b]];
        batch_loss += loss_grad_accumulate(res.model, trg, ctx, dE, dW);
      }
      if (!std::isfinite(batch_loss))
        throw NumericError("skipgram training diverged at epoch " +
                           std::to_string(epoch) + ", batch " +
                           std::to_string(batch_no));
      const double inv_batch = 1.0 / static_cast<double>(batch);
      for (double& g : dE.flat()) g *= inv_batch;
      for (double& g : dW.flat()) g *= inv_batch;
      opt.update(slot_e, res.model.E.flat(), dE.flat());
      opt.update(slot_w, res.model.W_out.flat(), dW.flat());
      epoch_loss += batch_loss;
      done += batch;
      ++batch_no;
    }
    res.loss_history.push_back(epoch_loss / static_cast<double>(per_epoch));
  }
  return res;
}

std::vector<double> embed_segment(const SkipgramModel& model,
                                  const SoftLabel& v) {
  check_label(v, model.k(), "soft label");
  std::vector<double> z(model.d(), 0.0);
  for (std::size_t k = 0; k < model.k(); ++k) {
    const double w = v.weights[k];
    if (w == 0.0) continue;
    axpy(w, model.E.row(k), z);
  }
  return z;
}

std::map<std::string, std::vector<double>> embed_class_average(
    const SegmentedCorpus& corpus, const std::vector<SoftLabel>& soft_labels,
    const SkipgramModel& model) {
  if (!corpus.has_labels())
    throw DataError("embed_class_average: corpus has no labels");
  if (soft_labels.size() != corpus.num_segments())
    throw DataError("embed_class_average: soft label count " +
                    std::to_string(soft_labels.size()) + " != segment count " +
                    std::to_string(corpus.num_segments()));
  std::map<std::string, std::vector<double>> sums;
  std::map<std::string, std::size_t> counts;
  for (std::size_t f = 0; f < corpus.num_segments(); ++f) {
    const Segment& seg = corpus.at(corpus.ref_at(f));
    if (!seg.label.has_value()) continue;
    std::vector<double> z = embed_segment(model, soft_labels[f]);
    auto it = sums.try_emplace(*seg.label, model.d(), 0.0).first;
    axpy(1.0, z, it->second);
    ++counts[*seg.label];
  }
  for (auto& [label, vec] : sums) {
    const double inv = 1.0 / static_cast<double>(counts[label]);
    for (double& v : vec) v *= inv;
  }
  return sums;
}

}  // namespace sawe
