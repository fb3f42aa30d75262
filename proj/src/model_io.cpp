// src/model_io.cpp

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

#include "sawe/model_io.hpp"

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "sawe/embedding_io.hpp"
#include "sawe/error.hpp"

namespace sawe {

namespace {

using nlohmann::json;

std::vector<std::string> index_ids(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

void write_matrix_block(std::ostream& out, const Matrix& m) {
  write_embedding_block(out, EmbeddingTable::from_matrix(m, index_ids(m.rows())));
}

void write_vector_block(std::ostream& out, const std::vector<double>& v,
                        const std::string& id) {
  Matrix m(1, v.size());
  std::copy(v.begin(), v.end(), m.row(0).begin());
  write_embedding_block(out, EmbeddingTable::from_matrix(m, {id}));
}

Matrix read_matrix_block(std::istream& in, const std::string& what,
                         std::size_t rows, std::size_t cols) {
  const Matrix m = read_embedding_block(in, what).to_matrix();
  if (m.rows() != rows || m.cols() != cols) {
    throw DataError(what + " block is " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", header promises " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
  return m;
}

std::vector<double> read_vector_block(std::istream& in, const std::string& what,
                                      std::size_t size) {
  const Matrix m = read_matrix_block(in, what, 1, size);
  return std::vector<double>(m.row(0).begin(), m.row(0).end());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw DataError("write failed: " + path);
}

void write_header(std::ostream& out, const json& header) {
  out << header.dump() << '\n';
}

json read_header(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("cannot read model header: " + path);
  }
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object() ||
      !header.contains("kind") || !header["kind"].is_string()) {
    throw DataError(path + ": malformed model header");
  }
  return header;
}

json expect_kind(std::istream& in, const std::string& path,
                 const std::string& kind) {
  const json header = read_header(in, path);
  const std::string found = header["kind"].get<std::string>();
  if (found != kind) {
    throw DataError(path + ": expected a " + kind + " model, found '" + found +
                    "'");
  }
  return header;
}

std::size_t size_field(const json& header, const char* name,
                       const std::string& path) {
  if (!header.contains(name) || !header[name].is_number_integer() ||
      header[name].get<long long>() < 1) {
    throw DataError(path + ": model header lacks a positive '" +
                    std::string(name) + "'");
  }
  return static_cast<std::size_t>(header[name].get<long long>());
}

}  // namespace

void save_centroids(const Centroids& centroids, const std::string& path) {
  if (centroids.k() == 0) throw DataError("refusing to save empty centroids");
  std::ofstream out = open_out(path);
  json header;
  header["kind"] = "centroids";
  header["k"] = centroids.k();
  header["dim"] = centroids.dim();
  header["sigma"] = centroids.sigma;
  header["normalized"] = centroids.normalized;
  write_header(out, header);
  write_matrix_block(out, centroids.means);
  finish_out(out, path);
}

Centroids load_centroids(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  const json header = expect_kind(in, path, "centroids");
  const std::size_t k = size_field(header, "k", path);
  const std::size_t dim = size_field(header, "dim", path);
  if (!header.contains("sigma") || !header["sigma"].is_number() ||
      !header.contains("normalized") || !header["normalized"].is_boolean()) {
    throw DataError(path + ": centroids header lacks sigma/normalized");
  }
  Centroids centroids;
  centroids.means = read_matrix_block(in, "centroid", k, dim);
  centroids.sigma = header["sigma"].get<double>();
  centroids.normalized = header["normalized"].get<bool>();
  if (!(centroids.sigma > 0.0)) {
    throw DataError(path + ": sigma must be positive");
  }
  return centroids;
}

void save_skipgram_model(const SkipgramModel& model, const std::string& path) {
  if (model.k() == 0) throw DataError("refusing to save an empty model");
  std::ofstream out = open_out(path);
  json header;
  header["kind"] = "skipgram";
  header["k"] = model.k();
  header["d"] = model.d();
  write_header(out, header);
  write_matrix_block(out, model.E);
  write_matrix_block(out, model.W_out);
  finish_out(out, path);
}

SkipgramModel load_skipgram_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  const json header = expect_kind(in, path, "skipgram");
  const std::size_t k = size_field(header, "k", path);
  const std::size_t d = size_field(header, "d", path);
  SkipgramModel model;
  model.E = read_matrix_block(in, "input embedding", k, d);
  model.W_out = read_matrix_block(in, "output weight", k, d);
  return model;
}

void save_projection_model(const ProjectionModel& model,
                           const std::string& path) {
  if (model.in_dim() == 0 || model.hidden_dim() == 0 || model.out_dim() == 0) {
    throw DataError("refusing to save an empty model");
  }
  std::ofstream out = open_out(path);
  json header;
  header["kind"] = "projection";
  header["in_dim"] = model.in_dim();
  header["hidden_dim"] = model.hidden_dim();
  header["out_dim"] = model.out_dim();
  header["rectified"] = model.rectified;
  write_header(out, header);
  write_matrix_block(out, model.W1);
  write_vector_block(out, model.b1, "b1");
  write_matrix_block(out, model.W2);
  write_vector_block(out, model.b2, "b2");
  finish_out(out, path);
}

ProjectionModel load_projection_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  const json header = expect_kind(in, path, "projection");
  const std::size_t in_dim = size_field(header, "in_dim", path);
  const std::size_t hidden = size_field(header, "hidden_dim", path);
  const std::size_t out_dim = size_field(header, "out_dim", path);
  if (!header.contains("rectified") || !header["rectified"].is_boolean()) {
    throw DataError(path + ": projection header lacks 'rectified'");
  }
  ProjectionModel model;
  model.W1 = read_matrix_block(in, "first layer", hidden, in_dim);
  model.b1 = read_vector_block(in, "first bias", hidden);
  model.W2 = read_matrix_block(in, "second layer", out_dim, hidden);
  model.b2 = read_vector_block(in, "second bias", out_dim);
  model.rectified = header["rectified"].get<bool>();
  return model;
}

std::string model_kind(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  return read_header(in, path)["kind"].get<std::string>();
}

}  // namespace sawe
