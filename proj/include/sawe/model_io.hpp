// include/sawe/model_io.hpp

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

#ifndef SAWE_MODEL_IO_HPP_
#define SAWE_MODEL_IO_HPP_

#include <string>

#include "sawe/clustering.hpp"
#include "sawe/projection.hpp"
#include "sawe/skipgram.hpp"

namespace sawe {

// Model files hold one JSON header line (kind + shape + scalars) followed
// by binary embedding blocks for each weight array. Weights cross the file
// boundary as float32, like every other embedding artifact.
//
//   centroids:  1 block  (means)
//   skipgram:   2 blocks (E, W_out)
//   projection: 4 blocks (W1, b1, W2, b2)

void save_centroids(const Centroids& centroids, const std::string& path);
Centroids load_centroids(const std::string& path);

void save_skipgram_model(const SkipgramModel& model, const std::string& path);
SkipgramModel load_skipgram_model(const std::string& path);

void save_projection_model(const ProjectionModel& model,
                           const std::string& path);
ProjectionModel load_projection_model(const std::string& path);

// Reads only the header; lets callers dispatch on the stored model kind.
std::string model_kind(const std::string& path);

}  // namespace sawe

#endif  // SAWE_MODEL_IO_HPP_
