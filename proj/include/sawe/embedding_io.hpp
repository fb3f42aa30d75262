// include/sawe/embedding_io.hpp

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

#ifndef SAWE_EMBEDDING_IO_HPP_
#define SAWE_EMBEDDING_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sawe/matrix.hpp"

namespace sawe {

// Binary embedding block:
//   magic "SAWE" | version u32 | rows u64 | dim u32
//   | per row: id length u16 + UTF-8 bytes | row-major float32 payload
// All integers and floats little-endian.
struct EmbeddingTable {
  std::vector<std::string> ids;
  std::vector<float> data;  // rows() * dim, row-major
  std::uint32_t dim = 0;

  std::size_t rows() const { return ids.size(); }
  std::span<const float> row(std::size_t r) const {
    return {data.data() + r * dim, dim};
  }

  // Conversions at the float32 file boundary; all in-memory math is double.
  Matrix to_matrix() const;
  static EmbeddingTable from_matrix(const Matrix& m,
                                    std::vector<std::string> ids);
};

// Stream forms support files with several consecutive blocks (model files).
void write_embedding_block(std::ostream& out, const EmbeddingTable& table);
EmbeddingTable read_embedding_block(std::istream& in,
                                    const std::string& what = "embeddings");

void save_embeddings(const std::string& path, const EmbeddingTable& table);
EmbeddingTable load_embeddings(const std::string& path);

}  // namespace sawe

#endif  // SAWE_EMBEDDING_IO_HPP_
