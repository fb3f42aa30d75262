// src/projection.cpp

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

#include "sawe/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sawe/error.hpp"
#include "sawe/parallel.hpp"
#include "sawe/rng.hpp"
#include "sawe/vecmath.hpp"

namespace sawe {

namespace {

void check_model(const ProjectionModel& m) {
  if (m.b1.size() != m.hidden_dim() || m.b2.size() != m.out_dim() ||
      m.W2.cols() != m.hidden_dim())
    throw DataError("projection model shape mismatch");
  if (!all_finite(m.W1.flat()) || !all_finite(m.b1) ||
      !all_finite(m.W2.flat()) || !all_finite(m.b2))
    throw NumericError("projection model has non-finite parameters");
}

struct ForwardCache {
  std::vector<double> h;    // pre-activation, hidden
  std::vector<double> a;    // post-activation, hidden
  std::vector<double> out;  // output
};

void forward(const ProjectionModel& m, std::span<const double> x,
             ForwardCache& c) {
  const std::size_t hid = m.hidden_dim(), out = m.out_dim();
  c.h.resize(hid);
  c.a.resize(hid);
  c.out.resize(out);
  for (std::size_t i = 0; i < hid; ++i) {
    c.h[i] = m.b1[i] + dot(m.W1.row(i), x);
    c.a[i] = m.rectified ? std::max(0.0, c.h[i]) : c.h[i];
  }
  for (std::size_t i = 0; i < out; ++i)
    c.out[i] = m.b2[i] + dot(m.W2.row(i), c.a);
}

// Parameter gradients for one input given dJ/dout; dJ/dx is not needed.
void backward(const ProjectionModel& m, std::span<const double> x,
              const ForwardCache& c, std::span<const double> dout,
              ProjectionGrads& g) {
  const std::size_t hid = m.hidden_dim(), out = m.out_dim();
  std::vector<double> da(hid, 0.0);
  for (std::size_t i = 0; i < out; ++i) {
    axpy(dout[i], c.a, g.dW2.row(i));
    g.db2[i] += dout[i];
    axpy(dout[i], m.W2.row(i), da);
  }
  for (std::size_t i = 0; i < hid; ++i) {
    const double dh = (m.rectified && c.h[i] <= 0.0) ? 0.0 : da[i];
    if (dh == 0.0) continue;
    axpy(dh, x, g.dW1.row(i));
    g.db1[i] += dh;
  }
}

// Loss and dJ/ds over sims = [sim(a,p), sim(a,n_1), ...]:
// J = -s_0/tau + logsumexp(s/tau); dJ/ds_i = (q_i - [i==0]) / tau.
double contrastive_core(std::span<const double> sims, double tau,
                        std::vector<double>* dsims) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  double mx = -std::numeric_limits<double>::infinity();
  for (double s : sims) mx = std::max(mx, s / tau);
  double z = 0.0;
  std::vector<double> q(sims.size());
  for (std::size_t i = 0; i < sims.size(); ++i) {
    q[i] = std::exp(sims[i] / tau - mx);
    z += q[i];
  }
  const double loss = -(sims[0] / tau - mx) + std::log(z);
  if (dsims != nullptr) {
    dsims->resize(sims.size());
    for (std::size_t i = 0; i < sims.size(); ++i)
      (*dsims)[i] = (q[i] / z - (i == 0 ? 1.0 : 0.0)) / tau;
  }
  return loss;
}

// dJ/da and dJ/dz for s = cos(a, z), given dJ/ds:
//   d cos/d a = z/(|a||z|) - cos * a/|a|^2, symmetrically for z.
void add_cosine_grads(std::span<const double> a, std::span<const double> z,
                      double cos_az, double na, double nz, double djds,
                      std::span<double> dJda, std::span<double> dJdz) {
  const double inv_prod = 1.0 / (na * nz);
  axpy(djds * inv_prod, z, dJda);
  axpy(-djds * cos_az / (na * na), a, dJda);
  axpy(djds * inv_prod, a, dJdz);
  axpy(-djds * cos_az / (nz * nz), z, dJdz);
}

}  // namespace

double contrastive_loss(std::span<const double> anchor,
                        std::span<const double> positive,
                        const std::vector<std::vector<double>>& negatives,
                        double tau) {
  if (negatives.empty())
    throw DataError("contrastive loss needs at least one negative");
  std::vector<double> sims;
  sims.reserve(negatives.size() + 1);
  sims.push_back(cosine_similarity(anchor, positive));
  for (const auto& n : negatives) sims.push_back(cosine_similarity(anchor, n));
  return contrastive_core(sims, tau, nullptr);
}

std::vector<double> project(const ProjectionModel& model,
                            std::span<const double> x) {
  check_model(model);
  if (x.size() != model.in_dim())
    throw DataError("projection input dim " + std::to_string(x.size()) +
                    " != model in_dim " + std::to_string(model.in_dim()));
  ForwardCache c;
  forward(model, x, c);
  return c.out;
}

ProjectionGrads::ProjectionGrads(const ProjectionModel& model)
    : dW1(model.W1.rows(), model.W1.cols()),
      db1(model.b1.size(), 0.0),
      dW2(model.W2.rows(), model.W2.cols()),
      db2(model.b2.size(), 0.0) {}

void ProjectionGrads::zero() {
  dW1.fill(0.0);
  db1.assign(db1.size(), 0.0);
  dW2.fill(0.0);
  db2.assign(db2.size(), 0.0);
}

void ProjectionGrads::scale(double s) {
  for (double& v : dW1.flat()) v *= s;
  for (double& v : db1) v *= s;
  for (double& v : dW2.flat()) v *= s;
  for (double& v : db2) v *= s;
}

double projection_pair_loss_grad(
    const ProjectionModel& model, std::span<const double> anchor,
    std::span<const double> positive,
    const std::vector<std::vector<double>>& negatives, double tau,
    ProjectionGrads* grads) {
  check_model(model);
  if (negatives.empty())
    throw DataError("contrastive loss needs at least one negative");

  const std::size_t n = negatives.size() + 2;  // anchor, positive, negatives
  std::vector<ForwardCache> caches(n);
  std::vector<std::span<const double>> inputs(n);
  inputs[0] = anchor;
  inputs[1] = positive;
  for (std::size_t j = 0; j < negatives.size(); ++j)
    inputs[j + 2] = negatives[j];
  for (std::size_t i = 0; i < n; ++i) {
    if (inputs[i].size() != model.in_dim())
      throw DataError("projection input dim mismatch");
    forward(model, inputs[i], caches[i]);
  }

  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    norms[i] = norm(caches[i].out);
    if (norms[i] == 0.0)
      throw NumericError("projected vector has zero norm; cosine undefined");
  }

  // sims[0] = cos(anchor, positive); sims[j] = cos(anchor, negative_j).
  std::vector<double> sims(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    sims[i - 1] =
        cosine_with_norms(caches[0].out, norms[0], caches[i].out, norms[i]);

  std::vector<double>* dsims_ptr = nullptr;
  std::vector<double> dsims;
  if (grads != nullptr) dsims_ptr = &dsims;
  const double loss = contrastive_core(sims, tau, dsims_ptr);
  if (grads == nullptr) return loss;

  std::vector<std::vector<double>> dout(n);
  for (std::size_t i = 0; i < n; ++i) dout[i].assign(model.out_dim(), 0.0);
  for (std::size_t i = 1; i < n; ++i)
    add_cosine_grads(caches[0].out, caches[i].out, sims[i - 1], norms[0],
                     norms[i], dsims[i - 1], dout[0], dout[i]);
  for (std::size_t i = 0; i < n; ++i)
    backward(model, inputs[i], caches[i], dout[i], *grads);
  return loss;
}

ProjectionModel init_projection(int in_dim, const ContrastiveConfig& config) {
  if (in_dim <= 0 || config.hidden_dim <= 0 || config.out_dim <= 0)
    throw std::invalid_argument("projection dims must be positive");
  ProjectionModel m;
  const std::size_t in = static_cast<std::size_t>(in_dim);
  const std::size_t hid = static_cast<std::size_t>(config.hidden_dim);
  const std::size_t out = static_cast<std::size_t>(config.out_dim);
  m.W1 = Matrix(hid, in);
  m.W2 = Matrix(out, hid);
  m.rectified = config.rectified;
  Rng rng(derive_seed(config.rng_seed, "projection"));
  const double s1 = 1.0 / std::sqrt(static_cast<double>(in));
  for (double& v : m.W1.flat()) v = rng.uniform(-s1, s1);
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hid));
  for (double& v : m.W2.flat()) v = rng.uniform(-s2, s2);
  // Rectified mode: positive b1 keeps units initially active and a small
  // random b2 keeps the projection of a fully dead input off the exact zero
  // vector, where cosine is undefined.
  m.b1.assign(hid, config.rectified ? 0.01 : 0.0);
  m.b2.assign(out, 0.0);
  if (config.rectified)
    for (double& v : m.b2) v = rng.uniform(-0.05, 0.05);
  return m;
}

ProjectionTrainResult train_projection(const SegmentedCorpus& corpus,
                                       const std::vector<ContextPair>& pairs,
                                       const ContrastiveConfig& config) {
  if (pairs.empty()) throw DataError("train_projection: no training pairs");
  if (config.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (config.batch_size <= 0)
    throw std::invalid_argument("batch_size must be positive");
  if (config.n_negatives <= 0)
    throw std::invalid_argument("n_negatives must be positive");
  if (!(config.tau > 0.0)) throw std::invalid_argument("tau must be positive");

  ProjectionTrainResult res;
  res.model = init_projection(corpus.dim(), config);
  Rng rng(derive_seed(config.rng_seed, "projection-train"));

  Optimizer opt(config.optimizer);
  const int slot_w1 = opt.add_slot(res.model.W1.flat().size());
  const int slot_b1 = opt.add_slot(res.model.b1.size());
  const int slot_w2 = opt.add_slot(res.model.W2.flat().size());
  const int slot_b2 = opt.add_slot(res.model.b2.size());

  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t per_epoch =
      config.max_pairs_per_epoch == 0
          ? pairs.size()
          : std::min(config.max_pairs_per_epoch, pairs.size());

  ProjectionGrads grads(res.model);
  std::vector<std::vector<double>> negatives(
      static_cast<std::size_t>(config.n_negatives));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t done = 0;
    int batch_no = 0;
    while (done < per_epoch) {
      const std::size_t batch =
          std::min(static_cast<std::size_t>(config.batch_size),
                   per_epoch - done);
      grads.zero();
      double batch_loss = 0.0;
      for (std::size_t b = 0; b < batch; ++b) {
        const ContextPair& pair = pairs[order[done + b]];
        std::vector<SegmentRef> negs = sample_negatives(
            corpus, pair.target, config.window, config.n_negatives, rng);
        for (std::size_t j = 0; j < negs.size(); ++j)
          negatives[j] = corpus.at(negs[j]).embedding;
        batch_loss += projection_pair_loss_grad(
            res.model, corpus.at(pair.target).embedding,
            corpus.at(pair.context).embedding, negatives, config.tau, &grads);
      }
      if (!std::isfinite(batch_loss))
        throw NumericError("projection training diverged at epoch " +
                           std::to_string(epoch) + ", batch " +
                           std::to_string(batch_no));
      grads.scale(1.0 / static_cast<double>(batch));
      opt.update(slot_w1, res.model.W1.flat(), grads.dW1.flat());
      opt.update(slot_b1, res.model.b1, grads.db1);
      opt.update(slot_w2, res.model.W2.flat(), grads.dW2.flat());
      opt.update(slot_b2, res.model.b2, grads.db2);
      epoch_loss += batch_loss;
      done += batch;
      ++batch_no;
    }
    res.loss_history.push_back(epoch_loss / static_cast<double>(per_epoch));
  }
  return res;
}

namespace kernels {

Matrix project_rows_serial(const ProjectionModel& model, const Matrix& rows) {
  check_model(model);
  if (rows.cols() != model.in_dim())
    throw DataError("projection input dim mismatch");
  Matrix out(rows.rows(), model.out_dim());
  ForwardCache c;
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    forward(model, rows.row(i), c);
    std::copy(c.out.begin(), c.out.end(), out.row(i).begin());
  }
  return out;
}

Matrix project_rows_parallel(const ProjectionModel& model,
                             const Matrix& rows) {
  check_model(model);
  if (rows.cols() != model.in_dim())
    throw DataError("projection input dim mismatch");
  Matrix out(rows.rows(), model.out_dim());
  parallel_for(rows.rows(), [&](std::size_t i) {
    ForwardCache c;
    forward(model, rows.row(i), c);
    std::copy(c.out.begin(), c.out.end(), out.row(i).begin());
  });
  return out;
}

}  // namespace kernels

}  // namespace sawe
