// src/synthgen.cpp

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

#include "sawe/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "sawe/error.hpp"
#include "sawe/rng.hpp"
#include "sawe/vecmath.hpp"

namespace sawe {

namespace {

void validate(const SynthConfig& c) {
  if (c.n_topics < 1 || c.n_classes < c.n_topics) {
    throw std::invalid_argument("need n_classes >= n_topics >= 1");
  }
  if (c.topic_overlap < 0.0 || c.topic_overlap > 1.0) {
    throw std::invalid_argument("topic_overlap must lie in [0, 1]");
  }
  if (c.n_utterances < 1) throw std::invalid_argument("n_utterances must be >= 1");
  if (c.min_length < 1 || c.max_length < c.min_length) {
    throw std::invalid_argument("need max_length >= min_length >= 1");
  }
  if (c.phonetic_dim < 1) throw std::invalid_argument("phonetic_dim must be >= 1");
  if (c.speaker_count < 1) throw std::invalid_argument("speaker_count must be >= 1");
  if (c.intra_class_noise < 0.0 || c.speaker_offset_scale < 0.0) {
    throw std::invalid_argument("noise scales must be >= 0");
  }
}

std::string padded(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

int digits(int max_value) {
  int w = 1;
  while (max_value >= 10) {
    max_value /= 10;
    ++w;
  }
  return w;
}

// Per-class sorted topic ids: the primary topic c mod T, plus the cyclic
// next topic for the first round(overlap * V) classes.
std::vector<std::vector<int>> assign_topics(const SynthConfig& c) {
  std::vector<std::vector<int>> topics(static_cast<std::size_t>(c.n_classes));
  const int n_shared =
      c.n_topics >= 2
          ? static_cast<int>(std::llround(c.topic_overlap * c.n_classes))
          : 0;
  for (int cls = 0; cls < c.n_classes; ++cls) {
    const int primary = cls % c.n_topics;
    auto& t = topics[static_cast<std::size_t>(cls)];
    t.push_back(primary);
    if (cls < n_shared) {
      t.push_back((primary + 1) % c.n_topics);
      std::sort(t.begin(), t.end());
    }
  }
  return topics;
}

std::vector<std::vector<int>> topic_pools(
    const SynthConfig& c, const std::vector<std::vector<int>>& class_topics) {
  std::vector<std::vector<int>> pools(static_cast<std::size_t>(c.n_topics));
  for (int cls = 0; cls < c.n_classes; ++cls) {
    for (int t : class_topics[static_cast<std::size_t>(cls)]) {
      pools[static_cast<std::size_t>(t)].push_back(cls);
    }
  }
  return pools;
}

struct Draft {
  std::vector<Utterance> utterances;
  std::vector<int> topics;                      // per utterance
  std::vector<std::vector<int>> distinct_words; // per utterance, sorted class ids
  bool covers_all = false;
};

Draft draw_corpus(const SynthConfig& c, const std::vector<std::string>& names,
                  const std::vector<std::vector<int>>& pools,
                  const Matrix& centroids, const Matrix& offsets, Rng& rng) {
  Draft draft;
  const int uw = digits(c.n_utterances - 1);
  const int sw = digits(c.max_length - 1);
  std::vector<char> seen(static_cast<std::size_t>(c.n_classes), 0);
  std::vector<int> scratch;
  for (int u = 0; u < c.n_utterances; ++u) {
    const int topic = static_cast<int>(rng.below(
        static_cast<std::uint64_t>(c.n_topics)));
    const int speaker = static_cast<int>(rng.below(
        static_cast<std::uint64_t>(c.speaker_count)));
    const int length =
        c.min_length + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                           c.max_length - c.min_length + 1)));
    const std::vector<int>& pool = pools[static_cast<std::size_t>(topic)];
    std::vector<int> words(static_cast<std::size_t>(length));
    if (c.distinct_words) {
      scratch = pool;
      rng.shuffle(scratch);
      std::copy(scratch.begin(), scratch.begin() + length, words.begin());
    } else {
      for (int& w : words) {
        w = pool[static_cast<std::size_t>(rng.below(pool.size()))];
      }
    }

    Utterance utt;
    utt.id = "u" + padded(u, uw);
    utt.speaker = "spk" + std::to_string(speaker);
    for (int p = 0; p < length; ++p) {
      const int cls = words[static_cast<std::size_t>(p)];
      seen[static_cast<std::size_t>(cls)] = 1;
      Segment seg;
      seg.id = utt.id + "s" + padded(p, sw);
      seg.position = p;
      seg.label = names[static_cast<std::size_t>(cls)];
      seg.embedding.resize(static_cast<std::size_t>(c.phonetic_dim));
      const auto cen = centroids.row(static_cast<std::size_t>(cls));
      const auto off = offsets.row(static_cast<std::size_t>(speaker));
      for (std::size_t i = 0; i < seg.embedding.size(); ++i) {
        seg.embedding[i] = cen[i] + c.intra_class_noise * rng.normal() + off[i];
      }
      utt.segments.push_back(std::move(seg));
    }
    draft.utterances.push_back(std::move(utt));
    draft.topics.push_back(topic);
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    draft.distinct_words.push_back(std::move(words));
  }
  draft.covers_all =
      std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; });
  return draft;
}

}  // namespace

std::pair<SegmentedCorpus, SynthTruth> generate(const SynthConfig& config) {
  validate(config);
  const auto class_topics = assign_topics(config);
  const auto pools = topic_pools(config, class_topics);
  if (config.distinct_words) {
    for (std::size_t t = 0; t < pools.size(); ++t) {
      if (pools[t].size() < static_cast<std::size_t>(config.max_length)) {
        throw DataError("topic " + std::to_string(t) + " pool has " +
                        std::to_string(pools[t].size()) +
                        " classes, smaller than max utterance length " +
                        std::to_string(config.max_length));
      }
    }
  }

  const int cw = std::max(2, digits(config.n_classes - 1));
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(config.n_classes));
  for (int cls = 0; cls < config.n_classes; ++cls) {
    names.push_back("w" + padded(cls, cw));
  }

  // Regenerate with a derived seed until every class appears; each attempt
  // is a pure function of (seed, attempt).
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(derive_seed(config.rng_seed,
                        "synthgen-attempt-" + std::to_string(attempt)));
    Matrix centroids(static_cast<std::size_t>(config.n_classes),
                     static_cast<std::size_t>(config.phonetic_dim));
    for (std::size_t r = 0; r < centroids.rows(); ++r) {
      double n = 0.0;
      do {
        for (std::size_t i = 0; i < centroids.cols(); ++i) {
          centroids(r, i) = rng.normal();
        }
        n = norm(centroids.row(r));
      } while (n == 0.0);
      for (std::size_t i = 0; i < centroids.cols(); ++i) centroids(r, i) /= n;
    }
    Matrix offsets(static_cast<std::size_t>(config.speaker_count),
                   static_cast<std::size_t>(config.phonetic_dim));
    for (std::size_t r = 0; r < offsets.rows(); ++r) {
      for (std::size_t i = 0; i < offsets.cols(); ++i) {
        offsets(r, i) = config.speaker_offset_scale * rng.normal();
      }
    }

    Draft draft =
        draw_corpus(config, names, pools, centroids, offsets, rng);
    if (!draft.covers_all) continue;

    SynthTruth truth;
    truth.class_names = names;
    truth.class_topics = class_topics;
    truth.centroids = std::move(centroids);
    truth.utterance_topics = std::move(draft.topics);
    truth.similarity = Matrix(static_cast<std::size_t>(config.n_classes),
                              static_cast<std::size_t>(config.n_classes));
    for (int a = 0; a < config.n_classes; ++a) {
      for (int b = 0; b < config.n_classes; ++b) {
        const auto& ta = class_topics[static_cast<std::size_t>(a)];
        const auto& tb = class_topics[static_cast<std::size_t>(b)];
        std::size_t shared = 0;
        for (int t : ta) {
          if (std::find(tb.begin(), tb.end(), t) != tb.end()) ++shared;
        }
        truth.similarity(static_cast<std::size_t>(a),
                         static_cast<std::size_t>(b)) =
            static_cast<double>(shared);
      }
    }

    // Votes: relevance (>= 3) iff the utterance's topic is one of the
    // keyword's topics; grades above and below that line follow the
    // co-occurrence strength with the keyword's topics.
    auto shares_topic = [&](int cls, int keyword) {
      return truth.similarity(static_cast<std::size_t>(cls),
                              static_cast<std::size_t>(keyword)) > 0.0;
    };
    for (int k = 0; k < config.n_classes; ++k) {
      auto& per_utt = truth.judgments.votes[names[static_cast<std::size_t>(k)]];
      const auto& ktopics = class_topics[static_cast<std::size_t>(k)];
      for (std::size_t u = 0; u < draft.utterances.size(); ++u) {
        const int topic = truth.utterance_topics[u];
        const bool share =
            std::find(ktopics.begin(), ktopics.end(), topic) != ktopics.end();
        bool contains = false;
        int bridge = 0;
        for (int cls : draft.distinct_words[u]) {
          if (cls == k) {
            contains = true;
          } else if (shares_topic(cls, k)) {
            ++bridge;
          }
        }
        int votes;
        if (share) {
          votes = contains ? 5 : (bridge >= 3 ? 4 : 3);
        } else {
          votes = bridge >= 2 ? 2 : (bridge >= 1 ? 1 : 0);
        }
        per_utt.emplace(draft.utterances[u].id, votes);
      }
    }

    SegmentedCorpus corpus =
        SegmentedCorpus::FromUtterances(std::move(draft.utterances));
    return {std::move(corpus), std::move(truth)};
  }
  throw DataError("no draw covered every class after " +
                  std::to_string(kMaxAttempts) +
                  " attempts; increase n_utterances");
}

std::vector<std::tuple<std::string, std::string, double>> reference_rows(
    const SynthTruth& truth) {
  std::vector<std::tuple<std::string, std::string, double>> rows;
  const std::size_t v = truth.class_names.size();
  rows.reserve(v * (v - 1) / 2);
  for (std::size_t a = 0; a < v; ++a) {
    for (std::size_t b = a + 1; b < v; ++b) {
      rows.emplace_back(truth.class_names[a], truth.class_names[b],
                        truth.similarity(a, b));
    }
  }
  return rows;
}

ReferenceSimilarities reference_similarities(const SynthTruth& truth) {
  ReferenceSimilarities ref;
  for (const auto& [a, b, s] : reference_rows(truth)) ref.insert(a, b, s);
  return ref;
}

void write_synth_files(const SegmentedCorpus& corpus, const SynthTruth& truth,
                       const std::string& corpus_path,
                       const std::string& reference_path,
                       const std::string& judgments_path) {
  save_corpus(corpus, corpus_path);
  save_reference_csv(reference_rows(truth), reference_path);
  save_judgments_csv(truth.judgments, judgments_path);
}

}  // namespace sawe
