// tools/sawe_main.cpp

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

// Batch pipeline driver. One static binary, one --seed, subcommands for
// every stage; all outputs are byte-identical across reruns with the same
// inputs and seed. Exit codes: 0 success, 1 usage, 2 data, 3 numeric.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sawe/clustering.hpp"
#include "sawe/corpus.hpp"
#include "sawe/embedding_io.hpp"
#include "sawe/error.hpp"
#include "sawe/eval_intrinsic.hpp"
#include "sawe/eval_qbe.hpp"
#include "sawe/model_io.hpp"
#include "sawe/parallel.hpp"
#include "sawe/pca.hpp"
#include "sawe/projection.hpp"
#include "sawe/rng.hpp"
#include "sawe/skipgram.hpp"
#include "sawe/synthgen.hpp"
#include "sawe/vecmath.hpp"

namespace {

using nlohmann::json;

struct GlobalOptions {
  std::uint64_t seed = 42;
  int threads = 0;
};

void apply_threads(const GlobalOptions& global) {
  if (global.threads > 0) sawe::set_num_threads(global.threads);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Loads an embedding table and checks that it lines up with the corpus
// segments one to one, in flat order.
sawe::Matrix load_aligned_embeddings(const std::string& path,
                                     const sawe::SegmentedCorpus& corpus) {
  const sawe::EmbeddingTable table = sawe::load_embeddings(path);
  const std::vector<std::string> ids = corpus.segment_ids();
  if (table.rows() != ids.size()) {
    throw sawe::DataError(path + " holds " + std::to_string(table.rows()) +
                          " rows for " + std::to_string(ids.size()) +
                          " corpus segments");
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (table.ids[i] != ids[i]) {
      throw sawe::DataError(path + ": row " + std::to_string(i) + " id '" +
                            table.ids[i] + "' does not match segment '" +
                            ids[i] + "'");
    }
  }
  return table.to_matrix();
}

std::vector<std::string> corpus_labels(const sawe::SegmentedCorpus& corpus) {
  if (!corpus.has_labels()) {
    throw sawe::DataError("corpus has no segment labels; evaluation needs them");
  }
  std::vector<std::string> labels;
  labels.reserve(corpus.num_segments());
  for (const sawe::Utterance& utt : corpus.utterances()) {
    for (const sawe::Segment& seg : utt.segments) {
      labels.push_back(seg.label.value_or(""));
    }
  }
  return labels;
}

// Segment embeddings grouped by word class, dropping classes with fewer
// than min_count instances (and unlabeled segments).
std::map<std::string, std::vector<std::vector<double>>> group_by_class(
    const sawe::SegmentedCorpus& corpus, const sawe::Matrix& embeddings,
    int min_count) {
  const std::vector<std::string> labels = corpus_labels(corpus);
  std::map<std::string, std::vector<std::vector<double>>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) continue;
    const auto row = embeddings.row(i);
    by_class[labels[i]].emplace_back(row.begin(), row.end());
  }
  for (auto it = by_class.begin(); it != by_class.end();) {
    if (static_cast<int>(it->second.size()) < min_count) {
      it = by_class.erase(it);
    } else {
      ++it;
    }
  }
  if (by_class.size() < 2) {
    throw sawe::DataError("fewer than 2 classes survive the --min-count filter");
  }
  return by_class;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sawe::DataError("cannot write file: " + path);
  out << text;
  if (!out) throw sawe::DataError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// gen-synth

struct GenSynthOptions {
  sawe::SynthConfig config;
  std::string corpus_out;
  std::string reference_out;
  std::string judgments_out;
};

void run_gen_synth(const GlobalOptions& global, GenSynthOptions& opt) {
  apply_threads(global);
  opt.config.rng_seed = global.seed;
  const auto [corpus, truth] = sawe::generate(opt.config);
  sawe::write_synth_files(corpus, truth, opt.corpus_out, opt.reference_out,
                          opt.judgments_out);
  std::printf("wrote %zu utterances, %zu segments, %d classes, %d topics\n",
              corpus.num_utterances(), corpus.num_segments(),
              opt.config.n_classes, opt.config.n_topics);
}

// ---------------------------------------------------------------------------
// cluster

struct ClusterOptions {
  std::string corpus_path;
  std::string out_path;
  int k = 5000;
  double sigma = 0.01;
  int max_iters = 100;
  double tol = 1e-9;
  int restarts = 10;
  bool normalize = true;
};

void run_cluster(const GlobalOptions& global, const ClusterOptions& opt) {
  apply_threads(global);
  const sawe::SegmentedCorpus corpus = sawe::load_corpus(opt.corpus_path);
  sawe::Matrix points = corpus.embedding_matrix();
  if (opt.normalize) points = sawe::unit_normalize_rows(points);
  const sawe::KmeansResult result =
      sawe::kmeans_restarts(points, opt.k, opt.max_iters, opt.tol,
                            sawe::derive_seed(global.seed, "cluster"),
                            opt.restarts);
  sawe::Centroids centroids;
  centroids.means = result.centroids;
  centroids.sigma = opt.sigma;
  centroids.normalized = opt.normalize;
  sawe::save_centroids(centroids, opt.out_path);
  std::printf("clustered %zu segments into %d clusters; objective %s after %d iterations\n",
              points.rows(), opt.k, format_double(result.objective).c_str(),
              result.iterations);
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  std::string mode;
  std::string corpus_path;
  std::string centroids_path;
  std::string out_path;
  int epochs = 5;
  int batch_size = 64;
  int dim = 100;
  int window = 3;
  int negatives = 20;
  double tau = 0.1;
  int hidden_dim = 1024;
  bool rectified = true;
  std::size_t max_pairs_per_epoch = 0;
  double learning_rate = 1e-3;
  std::string optimizer = "adam";
};

void run_train(const GlobalOptions& global, const TrainOptions& opt) {
  apply_threads(global);
  const sawe::SegmentedCorpus corpus = sawe::load_corpus(opt.corpus_path);
  const std::vector<sawe::ContextPair> pairs =
      sawe::extract_context_pairs(corpus, opt.window);

  if (opt.mode == "cluster-skipgram") {
    if (opt.centroids_path.empty()) {
      throw sawe::DataError("cluster-skipgram training requires --centroids");
    }
    const sawe::Centroids centroids = sawe::load_centroids(opt.centroids_path);
    const std::vector<sawe::SoftLabel> labels =
        sawe::soft_labels_batch(corpus, centroids);
    std::vector<std::pair<sawe::SoftLabel, sawe::SoftLabel>> training;
    training.reserve(pairs.size());
    for (const sawe::ContextPair& p : pairs) {
      training.emplace_back(labels[corpus.flat_index(p.target)],
                            labels[corpus.flat_index(p.context)]);
    }
    sawe::SkipgramTrainConfig config;
    config.epochs = opt.epochs;
    config.batch_size = opt.batch_size;
    config.d = opt.dim;
    config.rng_seed = global.seed;
    config.max_pairs_per_epoch = opt.max_pairs_per_epoch;
    config.optimizer.kind = opt.optimizer;
    config.optimizer.learning_rate = opt.learning_rate;
    const sawe::SkipgramTrainResult result =
        sawe::train_skipgram(training, config);
    sawe::save_skipgram_model(result.model, opt.out_path);
    std::printf("trained cluster-skipgram on %zu pairs; final epoch loss %s\n",
                training.size(),
                result.loss_history.empty()
                    ? "n/a (0 epochs)"
                    : format_double(result.loss_history.back()).c_str());
    return;
  }

  sawe::ContrastiveConfig config;
  config.tau = opt.tau;
  config.n_negatives = opt.negatives;
  config.epochs = opt.epochs;
  config.batch_size = opt.batch_size;
  config.hidden_dim = opt.hidden_dim;
  config.out_dim = opt.dim;
  config.rectified = opt.rectified;
  config.window = opt.window;
  config.rng_seed = global.seed;
  config.max_pairs_per_epoch = opt.max_pairs_per_epoch;
  config.optimizer.kind = opt.optimizer;
  config.optimizer.learning_rate = opt.learning_rate;
  const sawe::ProjectionTrainResult result =
      sawe::train_projection(corpus, pairs, config);
  sawe::save_projection_model(result.model, opt.out_path);
  std::printf("trained projection on %zu pairs; final epoch loss %s\n",
              pairs.size(),
              result.loss_history.empty()
                  ? "n/a (0 epochs)"
                  : format_double(result.loss_history.back()).c_str());
}

// ---------------------------------------------------------------------------
// embed

struct EmbedOptions {
  std::string model_path;
  std::string corpus_path;
  std::string centroids_path;
  std::string out_path;
};

void run_embed(const GlobalOptions& global, const EmbedOptions& opt) {
  apply_threads(global);
  const sawe::SegmentedCorpus corpus = sawe::load_corpus(opt.corpus_path);
  const std::string kind = sawe::model_kind(opt.model_path);

  sawe::Matrix semantic;
  if (kind == "skipgram") {
    if (opt.centroids_path.empty()) {
      throw sawe::DataError(
          "embedding with a cluster-skipgram model requires --centroids");
    }
    const sawe::SkipgramModel model =
        sawe::load_skipgram_model(opt.model_path);
    const sawe::Centroids centroids = sawe::load_centroids(opt.centroids_path);
    const std::vector<sawe::SoftLabel> labels =
        sawe::soft_labels_batch(corpus, centroids);
    semantic = sawe::Matrix(labels.size(), model.d());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const std::vector<double> z = sawe::embed_segment(model, labels[i]);
      std::copy(z.begin(), z.end(), semantic.row(i).begin());
    }
  } else if (kind == "projection") {
    const sawe::ProjectionModel model =
        sawe::load_projection_model(opt.model_path);
    semantic = sawe::kernels::project_rows_parallel(
        model, corpus.embedding_matrix());
  } else {
    throw sawe::DataError(opt.model_path + " holds '" + kind +
                          "', not a trained embedding model");
  }

  sawe::save_embeddings(opt.out_path, sawe::EmbeddingTable::from_matrix(
                                          semantic, corpus.segment_ids()));
  std::printf("embedded %zu segments to dimension %zu\n", semantic.rows(),
              semantic.cols());
}

// ---------------------------------------------------------------------------
// eval-sim

struct EvalSimOptions {
  std::string embeddings_path;
  std::string corpus_path;
  std::string reference_path;
  std::string out_path;
  std::string mode = "both";
  int repeats = 10;
  int min_count = 1;
};

void run_eval_sim(const GlobalOptions& global, const EvalSimOptions& opt) {
  apply_threads(global);
  const sawe::SegmentedCorpus corpus = sawe::load_corpus(opt.corpus_path);
  const sawe::Matrix embeddings =
      load_aligned_embeddings(opt.embeddings_path, corpus);
  const auto by_class = group_by_class(corpus, embeddings, opt.min_count);
  const sawe::ReferenceSimilarities reference =
      sawe::load_reference_csv(opt.reference_path);
  const sawe::SimilarityMode mode =
      opt.mode == "avg" ? sawe::SimilarityMode::kAvg
      : opt.mode == "single" ? sawe::SimilarityMode::kSingle
                             : sawe::SimilarityMode::kBoth;
  const sawe::SimilarityReport report = sawe::eval_word_similarity(
      by_class, reference, mode, opt.repeats, global.seed);

  json out;
  out["mode"] = opt.mode;
  out["n_classes"] = by_class.size();
  out["n_pairs"] = by_class.size() * (by_class.size() - 1) / 2;
  out["min_count"] = opt.min_count;
  if (mode != sawe::SimilarityMode::kSingle) out["rho_avg"] = report.rho_avg;
  if (mode != sawe::SimilarityMode::kAvg) {
    out["rho_single"] = report.rho_single;
    out["n_repeats"] = report.n_repeats;
    out["per_repeat"] = report.per_repeat;
  }
  write_text_file(opt.out_path, out.dump(2) + "\n");
  if (mode != sawe::SimilarityMode::kSingle) {
    std::printf("rho_avg %s\n", format_double(report.rho_avg).c_str());
  }
  if (mode != sawe::SimilarityMode::kAvg) {
    std::printf("rho_single %s over %d repeats\n",
                format_double(report.rho_single).c_str(), report.n_repeats);
  }
}

// ---------------------------------------------------------------------------
// eval-qbe

struct EvalQbeOptions {
  std::string embeddings_path;
  std::string corpus_path;
  std::string judgments_path;
  std::string out_path;
  std::string per_keyword_out;
  int queries_per_keyword = 3;
  bool mask = false;
};

void run_eval_qbe(const GlobalOptions& global, const EvalQbeOptions& opt) {
  apply_threads(global);
  if (opt.queries_per_keyword < 1) {
    throw CLI::ValidationError("--queries-per-keyword must be >= 1");
  }
  const sawe::SegmentedCorpus corpus = sawe::load_corpus(opt.corpus_path);
  const sawe::Matrix embeddings =
      load_aligned_embeddings(opt.embeddings_path, corpus);
  const sawe::QbEJudgments judgments =
      sawe::load_judgments_csv(opt.judgments_path);
  const sawe::SearchCollection collection =
      sawe::make_collection(corpus, embeddings);
  const std::vector<std::string> labels = corpus_labels(corpus);

  // Query instances: a seeded draw of labeled segments per keyword, embedded
  // with the same table that built the collection.
  sawe::Rng rng(sawe::derive_seed(global.seed, "qbe-queries"));
  std::map<std::string, std::vector<std::vector<double>>> queries;
  for (const auto& [keyword, votes] : judgments.votes) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == keyword) candidates.push_back(i);
    }
    if (candidates.empty()) {
      throw sawe::DataError("keyword '" + keyword +
                            "' has no labeled segments in the corpus");
    }
    rng.shuffle(candidates);
    const std::size_t take = std::min<std::size_t>(
        candidates.size(), static_cast<std::size_t>(opt.queries_per_keyword));
    auto& qs = queries[keyword];
    for (std::size_t t = 0; t < take; ++t) {
      const auto row = embeddings.row(candidates[t]);
      qs.emplace_back(row.begin(), row.end());
    }
  }

  const sawe::QbEResult result =
      sawe::run_qbe(queries, collection, judgments, opt.mask);

  json out;
  out["mask"] = opt.mask;
  out["queries_per_keyword"] = opt.queries_per_keyword;
  out["p_at_10"] = result.p_at_10;
  out["p_at_n"] = result.p_at_n;
  out["eer"] = result.eer;
  out["rho_votes"] = result.rho_votes;
  out["n_keywords"] = result.per_keyword.size();
  out["excluded_keywords"] = result.excluded_keywords;
  json per_kw = json::object();
  for (const auto& [kw, m] : result.per_keyword) {
    per_kw[kw] = {{"p_at_10", m.p_at_10},     {"p_at_n", m.p_at_n},
                  {"eer", m.eer},             {"rho_votes", m.rho_votes},
                  {"n_relevant", m.n_relevant}, {"n_instances", m.n_instances}};
  }
  out["per_keyword"] = per_kw;
  write_text_file(opt.out_path, out.dump(2) + "\n");

  if (!opt.per_keyword_out.empty()) {
    std::string csv = "keyword,p_at_10,p_at_n,eer,rho_votes,n_relevant,n_instances\n";
    for (const auto& [kw, m] : result.per_keyword) {
      csv += kw + ',' + format_double(m.p_at_10) + ',' +
             format_double(m.p_at_n) + ',' + format_double(m.eer) + ',' +
             format_double(m.rho_votes) + ',' + std::to_string(m.n_relevant) +
             ',' + std::to_string(m.n_instances) + '\n';
    }
    write_text_file(opt.per_keyword_out, csv);
  }
  std::printf("qbe%s over %zu keywords: P@10 %s, P@N %s, EER %s, rho_votes %s\n",
              opt.mask ? " (masked)" : "", result.per_keyword.size(),
              format_double(result.p_at_10).c_str(),
              format_double(result.p_at_n).c_str(),
              format_double(result.eer).c_str(),
              format_double(result.rho_votes).c_str());
}

// ---------------------------------------------------------------------------
// export-pca

struct ExportPcaOptions {
  std::string embeddings_path;
  std::string corpus_path;
  std::string out_path;
  std::vector<std::string> probe_classes;
  int neighbors = 0;
  std::string neighbors_out;
};

void run_export_pca(const GlobalOptions& global, const ExportPcaOptions& opt) {
  apply_threads(global);
  if (opt.neighbors > 0 && opt.neighbors_out.empty()) {
    throw CLI::ValidationError("--neighbors requires --neighbors-out");
  }
  const sawe::SegmentedCorpus corpus = sawe::load_corpus(opt.corpus_path);
  const sawe::Matrix embeddings =
      load_aligned_embeddings(opt.embeddings_path, corpus);
  const auto by_class = group_by_class(corpus, embeddings, 1);

  std::vector<std::string> names;
  sawe::Matrix means(by_class.size(), embeddings.cols());
  std::size_t r = 0;
  for (const auto& [name, instances] : by_class) {
    names.push_back(name);
    for (const auto& x : instances) {
      for (std::size_t j = 0; j < x.size(); ++j) means(r, j) += x[j];
    }
    const double inv = 1.0 / static_cast<double>(instances.size());
    for (std::size_t j = 0; j < means.cols(); ++j) means(r, j) *= inv;
    ++r;
  }

  const sawe::PcaResult pca = sawe::pca_top2(means);
  if (pca.rank_deficient) {
    std::fprintf(stderr,
                 "warning: class means are collinear; the second component "
                 "carries ~zero variance\n");
  }
  std::string csv = "class,x,y\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    csv += names[i] + ',' + format_double(pca.projected(i, 0)) + ',' +
           format_double(pca.projected(i, 1)) + '\n';
  }
  write_text_file(opt.out_path, csv);

  if (opt.neighbors > 0) {
    std::vector<std::string> probes = opt.probe_classes;
    if (probes.empty()) probes = names;
    std::string nn = "class,rank,neighbor,cosine\n";
    for (const std::string& probe : probes) {
      const auto it = std::find(names.begin(), names.end(), probe);
      if (it == names.end()) {
        throw sawe::DataError("probe class '" + probe +
                              "' is not in the embedding set");
      }
      const std::size_t p = static_cast<std::size_t>(it - names.begin());
      std::vector<std::pair<double, std::string>> sims;
      for (std::size_t o = 0; o < names.size(); ++o) {
        if (o == p) continue;
        sims.emplace_back(sawe::cosine_similarity(means.row(p), means.row(o)),
                          names[o]);
      }
      std::sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      const std::size_t take =
          std::min<std::size_t>(sims.size(), static_cast<std::size_t>(opt.neighbors));
      for (std::size_t t = 0; t < take; ++t) {
        nn += probe + ',' + std::to_string(t + 1) + ',' + sims[t].second + ',' +
              format_double(sims[t].first) + '\n';
      }
    }
    write_text_file(opt.neighbors_out, nn);
  }
  std::printf("projected %zu classes; variances %s %s\n", names.size(),
              format_double(pca.variances[0]).c_str(),
              format_double(pca.variances[1]).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semantic acoustic word embedding pipeline"};
  app.set_config("--config", "", "read options from a key=value file");
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed,
                 "base RNG seed, fanned out per stage by name")
      ->capture_default_str();
  app.add_option("--threads", global.threads,
                 "worker threads; 0 keeps the OpenMP default (results never "
                 "depend on this)")
      ->capture_default_str();

  // gen-synth
  GenSynthOptions gen;
  CLI::App* gen_cmd =
      app.add_subcommand("gen-synth", "generate a synthetic topic corpus");
  gen_cmd->add_option("--classes", gen.config.n_classes, "word classes (V)")
      ->capture_default_str();
  gen_cmd->add_option("--topics", gen.config.n_topics, "topics (T)")
      ->capture_default_str();
  gen_cmd->add_option("--overlap", gen.config.topic_overlap,
                      "fraction of classes in two topics")
      ->capture_default_str();
  gen_cmd->add_option("--utterances", gen.config.n_utterances,
                      "number of utterances")
      ->capture_default_str();
  gen_cmd->add_option("--min-length", gen.config.min_length,
                      "shortest utterance")
      ->capture_default_str();
  gen_cmd->add_option("--max-length", gen.config.max_length,
                      "longest utterance")
      ->capture_default_str();
  gen_cmd->add_option("--phonetic-dim", gen.config.phonetic_dim,
                      "phonetic embedding dimension")
      ->capture_default_str();
  gen_cmd->add_option("--noise", gen.config.intra_class_noise,
                      "per-coordinate within-class noise")
      ->capture_default_str();
  gen_cmd->add_option("--speakers", gen.config.speaker_count, "speaker count")
      ->capture_default_str();
  gen_cmd->add_option("--speaker-scale", gen.config.speaker_offset_scale,
                      "speaker offset scale")
      ->capture_default_str();
  gen_cmd->add_flag("--distinct-words", gen.config.distinct_words,
                    "sample utterance words without replacement");
  gen_cmd->add_option("--corpus-out", gen.corpus_out, "corpus JSONL path")
      ->required();
  gen_cmd->add_option("--reference-out", gen.reference_out,
                      "reference similarity CSV path")
      ->required();
  gen_cmd->add_option("--judgments-out", gen.judgments_out,
                      "QbE judgments CSV path")
      ->required();
  gen_cmd->callback([&] { run_gen_synth(global, gen); });

  // cluster
  ClusterOptions cluster;
  CLI::App* cluster_cmd = app.add_subcommand(
      "cluster", "k-means over the phonetic embedding space");
  cluster_cmd->add_option("--corpus", cluster.corpus_path, "corpus JSONL")
      ->required();
  cluster_cmd->add_option("--k", cluster.k, "number of clusters")
      ->capture_default_str();
  cluster_cmd->add_option("--sigma", cluster.sigma,
                          "soft-label temperature stored with the centroids")
      ->capture_default_str();
  cluster_cmd->add_option("--max-iters", cluster.max_iters, "iteration cap")
      ->capture_default_str();
  cluster_cmd->add_option("--tol", cluster.tol, "objective-decrease stop")
      ->capture_default_str();
  cluster_cmd->add_option("--restarts", cluster.restarts,
                          "independent runs, best objective kept")
      ->capture_default_str();
  cluster_cmd->add_flag("--normalize,!--no-normalize", cluster.normalize,
                        "unit-normalize embeddings first (spherical k-means)")
      ->capture_default_str();
  cluster_cmd->add_option("--out", cluster.out_path, "centroids file")
      ->required();
  cluster_cmd->callback([&] { run_cluster(global, cluster); });

  // train
  TrainOptions train;
  CLI::App* train_cmd =
      app.add_subcommand("train", "train a semantic embedding model");
  train_cmd->add_option("--mode", train.mode, "training strategy")
      ->required()
      ->check(CLI::IsMember({"cluster-skipgram", "projection"}));
  train_cmd->add_option("--corpus", train.corpus_path, "corpus JSONL")
      ->required();
  train_cmd->add_option("--centroids", train.centroids_path,
                        "centroids file (cluster-skipgram)");
  train_cmd->add_option("--out", train.out_path, "model file")->required();
  train_cmd->add_option("--epochs", train.epochs, "training epochs")
      ->capture_default_str();
  train_cmd->add_option("--batch-size", train.batch_size, "minibatch size")
      ->capture_default_str();
  train_cmd->add_option("--dim", train.dim, "semantic embedding dimension")
      ->capture_default_str();
  train_cmd->add_option("--window", train.window, "context window")
      ->capture_default_str();
  train_cmd->add_option("--negatives", train.negatives,
                        "negatives per pair (projection)")
      ->capture_default_str();
  train_cmd->add_option("--tau", train.tau, "contrastive temperature")
      ->capture_default_str();
  train_cmd->add_option("--hidden-dim", train.hidden_dim,
                        "projection hidden width")
      ->capture_default_str();
  train_cmd->add_flag("--rectified,!--linear", train.rectified,
                      "rectifier between projection layers")
      ->capture_default_str();
  train_cmd->add_option("--max-pairs-per-epoch", train.max_pairs_per_epoch,
                        "subsample cap per epoch; 0 uses every pair")
      ->capture_default_str();
  train_cmd->add_option("--learning-rate", train.learning_rate, "step size")
      ->capture_default_str();
  train_cmd->add_option("--optimizer", train.optimizer, "sgd or adam")
      ->check(CLI::IsMember({"sgd", "adam"}))
      ->capture_default_str();
  train_cmd->callback([&] { run_train(global, train); });

  // embed
  EmbedOptions embed;
  CLI::App* embed_cmd =
      app.add_subcommand("embed", "embed every segment with a trained model");
  embed_cmd->add_option("--model", embed.model_path, "model file")->required();
  embed_cmd->add_option("--corpus", embed.corpus_path, "corpus JSONL")
      ->required();
  embed_cmd->add_option("--centroids", embed.centroids_path,
                        "centroids file (cluster-skipgram models)");
  embed_cmd->add_option("--out", embed.out_path, "embeddings file")
      ->required();
  embed_cmd->callback([&] { run_embed(global, embed); });

  // eval-sim
  EvalSimOptions eval_sim;
  CLI::App* sim_cmd = app.add_subcommand(
      "eval-sim", "word-similarity evaluation against a reference");
  sim_cmd->add_option("--embeddings", eval_sim.embeddings_path,
                      "segment embeddings file")
      ->required();
  sim_cmd->add_option("--corpus", eval_sim.corpus_path,
                      "corpus JSONL (provides labels)")
      ->required();
  sim_cmd->add_option("--reference", eval_sim.reference_path,
                      "reference similarity CSV")
      ->required();
  sim_cmd->add_option("--mode", eval_sim.mode, "avg, single, or both")
      ->check(CLI::IsMember({"avg", "single", "both"}))
      ->capture_default_str();
  sim_cmd->add_option("--repeats", eval_sim.repeats,
                      "single-mode sampling repeats")
      ->capture_default_str();
  sim_cmd->add_option("--min-count", eval_sim.min_count,
                      "drop classes with fewer instances")
      ->capture_default_str();
  sim_cmd->add_option("--out", eval_sim.out_path, "JSON report path")
      ->required();
  sim_cmd->callback([&] { run_eval_sim(global, eval_sim); });

  // eval-qbe
  EvalQbeOptions eval_qbe;
  CLI::App* qbe_cmd = app.add_subcommand(
      "eval-qbe", "query-by-example search evaluation");
  qbe_cmd->add_option("--embeddings", eval_qbe.embeddings_path,
                      "segment embeddings file")
      ->required();
  qbe_cmd->add_option("--corpus", eval_qbe.corpus_path, "corpus JSONL")
      ->required();
  qbe_cmd->add_option("--judgments", eval_qbe.judgments_path,
                      "relevance judgments CSV")
      ->required();
  qbe_cmd->add_option("--queries-per-keyword", eval_qbe.queries_per_keyword,
                      "sampled query instances per keyword")
      ->capture_default_str();
  qbe_cmd->add_flag("--mask", eval_qbe.mask,
                    "remove exact query-class matches before scoring");
  qbe_cmd->add_option("--out", eval_qbe.out_path, "JSON report path")
      ->required();
  qbe_cmd->add_option("--per-keyword-out", eval_qbe.per_keyword_out,
                      "optional per-keyword CSV");
  qbe_cmd->callback([&] { run_eval_qbe(global, eval_qbe); });

  // export-pca
  ExportPcaOptions pca;
  CLI::App* pca_cmd = app.add_subcommand(
      "export-pca", "project class-average embeddings to 2-D for plotting");
  pca_cmd->add_option("--embeddings", pca.embeddings_path,
                      "segment embeddings file")
      ->required();
  pca_cmd->add_option("--corpus", pca.corpus_path, "corpus JSONL")->required();
  pca_cmd->add_option("--out", pca.out_path, "points CSV path")->required();
  pca_cmd->add_option("--classes", pca.probe_classes,
                      "probe classes for neighbor lists")
      ->delimiter(',');
  pca_cmd->add_option("--neighbors", pca.neighbors,
                      "nearest neighbors per probe class")
      ->capture_default_str();
  pca_cmd->add_option("--neighbors-out", pca.neighbors_out,
                      "neighbor list CSV path");
  pca_cmd->callback([&] { run_export_pca(global, pca); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const sawe::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const sawe::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
