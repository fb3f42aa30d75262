// src/embedding_io.cpp

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

#include "sawe/embedding_io.hpp"

#include <cstring>
#include <fstream>
#include <limits>

#include "sawe/error.hpp"

namespace sawe {

namespace {

constexpr char kMagic[4] = {'S', 'A', 'W', 'E'};
constexpr std::uint32_t kVersion = 1;

void put_u16(std::ostream& out, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff),
                     static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint16_t get_u16(std::istream& in, const std::string& what) {
  unsigned char b[2];
  if (!in.read(reinterpret_cast<char*>(b), 2))
    throw DataError("truncated " + what + " block");
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t get_u32(std::istream& in, const std::string& what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw DataError("truncated " + what + " block");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in, const std::string& what) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8))
    throw DataError("truncated " + what + " block");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

Matrix EmbeddingTable::to_matrix() const {
  Matrix m(rows(), dim);
  for (std::size_t i = 0; i < data.size(); ++i)
    m.data()[i] = static_cast<double>(data[i]);
  return m;
}

EmbeddingTable EmbeddingTable::from_matrix(const Matrix& m,
                                           std::vector<std::string> ids) {
  if (ids.size() != m.rows())
    throw DataError("id/row count mismatch: " + std::to_string(ids.size()) +
                    " ids for " + std::to_string(m.rows()) + " rows");
  EmbeddingTable t;
  t.ids = std::move(ids);
  t.dim = static_cast<std::uint32_t>(m.cols());
  t.data.resize(m.rows() * m.cols());
  for (std::size_t i = 0; i < t.data.size(); ++i)
    t.data[i] = static_cast<float>(m.data()[i]);
  return t;
}

void write_embedding_block(std::ostream& out, const EmbeddingTable& table) {
  if (table.data.size() != table.rows() * table.dim)
    throw DataError("id/row count mismatch: payload has " +
                    std::to_string(table.data.size()) + " values for " +
                    std::to_string(table.rows()) + " ids of dim " +
                    std::to_string(table.dim));
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u64(out, table.rows());
  put_u32(out, table.dim);
  for (const std::string& id : table.ids) {
    if (id.size() > std::numeric_limits<std::uint16_t>::max())
      throw DataError("segment id too long for id table: " + id);
    put_u16(out, static_cast<std::uint16_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  static_assert(sizeof(float) == 4);
  // Little-endian host assumed for the payload fast path.
  if (!table.data.empty())
    out.write(reinterpret_cast<const char*>(table.data.data()),
              static_cast<std::streamsize>(table.data.size() * 4));
}

EmbeddingTable read_embedding_block(std::istream& in,
                                    const std::string& what) {
  char magic[4];
  if (!in.read(magic, 4)) throw DataError("truncated " + what + " block");
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("bad magic bytes in " + what + " block");
  const std::uint32_t version = get_u32(in, what);
  if (version != kVersion)
    throw DataError("unsupported " + what + " block version " +
                    std::to_string(version));
  const std::uint64_t rows = get_u64(in, what);
  const std::uint32_t dim = get_u32(in, what);
  EmbeddingTable table;
  table.dim = dim;
  table.ids.reserve(rows);
  for (std::uint64_t r = 0; r < rows; ++r) {
    const std::uint16_t len = get_u16(in, what);
    std::string id(len, '\0');
    if (!in.read(id.data(), len)) throw DataError("truncated " + what + " block");
    table.ids.push_back(std::move(id));
  }
  table.data.resize(rows * dim);
  if (!table.data.empty() &&
      !in.read(reinterpret_cast<char*>(table.data.data()),
               static_cast<std::streamsize>(table.data.size() * 4)))
    throw DataError("truncated " + what + " block");
  return table;
}

void save_embeddings(const std::string& path, const EmbeddingTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write embedding file: " + path);
  write_embedding_block(out, table);
  if (!out) throw DataError("write failed: " + path);
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding file: " + path);
  return read_embedding_block(in, path);
}

}  // namespace sawe
