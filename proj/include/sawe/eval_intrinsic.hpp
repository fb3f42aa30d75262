// include/sawe/eval_intrinsic.hpp

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

#ifndef SAWE_EVAL_INTRINSIC_HPP_
#define SAWE_EVAL_INTRINSIC_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sawe {

// Ranks 1..n with ties replaced by the mean of the tied rank positions.
std::vector<double> average_ranks(std::span<const double> xs);

// Pearson correlation of average ranks. Throws on length mismatch, length
// < 2, or zero rank variance on either side.
double spearman_rho(std::span<const double> xs, std::span<const double> ys);

// Symmetric word-pair similarity scores keyed by unordered pair.
class ReferenceSimilarities {
 public:
  void insert(const std::string& a, const std::string& b, double score);
  bool contains(const std::string& a, const std::string& b) const;
  // Throws DataError naming the pair when missing.
  double at(const std::string& a, const std::string& b) const;
  std::size_t size() const { return scores_.size(); }

 private:
  static std::pair<std::string, std::string> key(const std::string& a,
                                                 const std::string& b);
  std::map<std::pair<std::string, std::string>, double> scores_;
};

// CSV `word_a,word_b,score`, symmetric closure applied on load.
ReferenceSimilarities load_reference_csv(const std::string& path);
void save_reference_csv(
    const std::vector<std::tuple<std::string, std::string, double>>& rows,
    const std::string& path);

enum class SimilarityMode { kAvg, kSingle, kBoth };

struct SimilarityReport {
  double rho_avg = 0.0;
  double rho_single = 0.0;  // mean of per_repeat
  int n_repeats = 0;
  std::vector<double> per_repeat;
};

// Word-similarity evaluation. avg: one mean embedding per class, cosine over
// all unordered class pairs, rho against the reference. single: per repeat,
// sample one instance per class (seeded) and average the per-repeat rho.
SimilarityReport eval_word_similarity(
    const std::map<std::string, std::vector<std::vector<double>>>&
        embeddings_by_class,
    const ReferenceSimilarities& reference, SimilarityMode mode,
    int n_repeats = 10, std::uint64_t seed = 42);

}  // namespace sawe

#endif  // SAWE_EVAL_INTRINSIC_HPP_
