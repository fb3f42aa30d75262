// src/corpus.cpp

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

#include "sawe/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "sawe/error.hpp"
#include "sawe/vecmath.hpp"

namespace sawe {

SegmentedCorpus SegmentedCorpus::FromUtterances(
    std::vector<Utterance> utterances) {
  SegmentedCorpus corpus;
  std::unordered_set<std::string> utt_ids, seg_ids;
  for (const Utterance& utt : utterances) {
    if (!utt_ids.insert(utt.id).second)
      throw DataError("duplicate utterance_id: " + utt.id);
    if (utt.segments.empty())
      throw DataError("utterance has no segments: " + utt.id);
    for (std::size_t pos = 0; pos < utt.segments.size(); ++pos) {
      const Segment& seg = utt.segments[pos];
      if (!seg_ids.insert(seg.id).second)
        throw DataError("duplicate segment_id: " + seg.id);
      if (seg.position != static_cast<int>(pos))
        throw DataError("segment " + seg.id + " in utterance " + utt.id +
                        " breaks the contiguous 0..L-1 position range");
      if (seg.embedding.empty())
        throw DataError("segment " + seg.id + " has an empty embedding");
      if (corpus.dim_ == 0)
        corpus.dim_ = static_cast<int>(seg.embedding.size());
      else if (static_cast<int>(seg.embedding.size()) != corpus.dim_)
        throw DataError("dimension mismatch at segment " + seg.id + ": got " +
                        std::to_string(seg.embedding.size()) + ", expected " +
                        std::to_string(corpus.dim_));
      if (seg.label.has_value()) corpus.has_labels_ = true;
    }
  }
  corpus.offsets_.reserve(utterances.size());
  std::size_t off = 0;
  for (const Utterance& utt : utterances) {
    corpus.offsets_.push_back(off);
    off += utt.segments.size();
  }
  corpus.total_segments_ = off;
  corpus.utterances_ = std::move(utterances);
  return corpus;
}

SegmentRef SegmentedCorpus::ref_at(std::size_t flat) const {
  // offsets_ is sorted; find the utterance whose range contains `flat`.
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
  const std::size_t u = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  return {static_cast<std::uint32_t>(u),
          static_cast<std::uint32_t>(flat - offsets_[u])};
}

Matrix SegmentedCorpus::embedding_matrix() const {
  Matrix m(total_segments_, static_cast<std::size_t>(dim_));
  std::size_t r = 0;
  for (const Utterance& utt : utterances_)
    for (const Segment& seg : utt.segments) {
      std::copy(seg.embedding.begin(), seg.embedding.end(), m.row(r).begin());
      ++r;
    }
  return m;
}

std::vector<std::string> SegmentedCorpus::segment_ids() const {
  std::vector<std::string> ids;
  ids.reserve(total_segments_);
  for (const Utterance& utt : utterances_)
    for (const Segment& seg : utt.segments) ids.push_back(seg.id);
  return ids;
}

namespace {

Utterance parse_utterance(const nlohmann::json& j) {
  Utterance utt;
  utt.id = j.at("utterance_id").get<std::string>();
  utt.speaker = j.at("speaker_id").get<std::string>();
  for (const auto& js : j.at("segments")) {
    Segment seg;
    seg.id = js.at("segment_id").get<std::string>();
    seg.position = js.at("position").get<int>();
    if (js.contains("label") && !js.at("label").is_null())
      seg.label = js.at("label").get<std::string>();
    seg.embedding = js.at("embedding").get<std::vector<double>>();
    if (!all_finite(seg.embedding))
      throw DataError("segment " + seg.id + " has a non-finite embedding");
    utt.segments.push_back(std::move(seg));
  }
  return utt;
}

}  // namespace

SegmentedCorpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);
  std::vector<Utterance> utterances;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      utterances.push_back(parse_utterance(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": malformed record: " + e.what());
    }
  }
  return SegmentedCorpus::FromUtterances(std::move(utterances));
}

void save_corpus(const SegmentedCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path);
  for (const Utterance& utt : corpus.utterances()) {
    nlohmann::ordered_json j;
    j["utterance_id"] = utt.id;
    j["speaker_id"] = utt.speaker;
    auto& segs = j["segments"] = nlohmann::ordered_json::array();
    for (const Segment& seg : utt.segments) {
      nlohmann::ordered_json js;
      js["segment_id"] = seg.id;
      js["position"] = seg.position;
      if (seg.label.has_value())
        js["label"] = *seg.label;
      else
        js["label"] = nullptr;
      js["embedding"] = seg.embedding;
      segs.push_back(std::move(js));
    }
    out << j.dump() << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

std::vector<ContextPair> extract_context_pairs(const SegmentedCorpus& corpus,
                                               int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<ContextPair> pairs;
  const auto& utts = corpus.utterances();
  for (std::uint32_t u = 0; u < utts.size(); ++u) {
    const int len = static_cast<int>(utts[u].segments.size());
    for (int i = 0; i < len; ++i) {
      const int lo = std::max(0, i - window);
      const int hi = std::min(len - 1, i + window);
      for (int j = lo; j <= hi; ++j) {
        if (j == i) continue;
        pairs.push_back({{u, static_cast<std::uint32_t>(i)},
                         {u, static_cast<std::uint32_t>(j)}});
      }
    }
  }
  return pairs;
}

std::vector<SegmentRef> sample_negatives(const SegmentedCorpus& corpus,
                                         SegmentRef anchor, int window,
                                         int count, Rng& rng) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (count < 0) throw std::invalid_argument("count must be >= 0");
  const std::size_t total = corpus.num_segments();
  const int len =
      static_cast<int>(corpus.utterances()[anchor.utterance].segments.size());
  const int pos = static_cast<int>(anchor.position);
  // Excluded flat range: the anchor plus its +/- window inside its utterance.
  const std::size_t base = corpus.flat_index({anchor.utterance, 0});
  const std::size_t lo = base + static_cast<std::size_t>(std::max(0, pos - window));
  const std::size_t hi =
      base + static_cast<std::size_t>(std::min(len - 1, pos + window));
  const std::size_t excluded = hi - lo + 1;
  if (total <= excluded)
    throw DataError("no eligible negative: all segments are in-context");
  const std::size_t eligible = total - excluded;
  std::vector<SegmentRef> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::size_t r = static_cast<std::size_t>(rng.below(eligible));
    if (r >= lo) r += excluded;  // skip over the excluded range
    out.push_back(corpus.ref_at(r));
  }
  return out;
}

std::vector<SegmentRef> sample_negatives(const SegmentedCorpus& corpus,
                                         SegmentRef anchor, int window,
                                         int count, std::uint64_t seed) {
  Rng rng(seed);
  return sample_negatives(corpus, anchor, window, count, rng);
}

}  // namespace sawe
