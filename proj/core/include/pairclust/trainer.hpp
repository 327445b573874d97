#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pairclust/corpus.hpp"
#include "pairclust/encoder.hpp"
#include "pairclust/eval.hpp"
#include "pairclust/pairing.hpp"
#include "pairclust/params.hpp"

namespace pairclust::trainer {

enum class OptimizerKind { sgd, adam };
OptimizerKind parse_optimizer(const std::string& name);
std::string optimizer_name(OptimizerKind k);

struct TrainConfig {
  double learning_rate = 1e-3;
  double l2 = 1e-4;
  size_t epochs = 10;
  size_t batch_size = 32;
  uint64_t shuffle_seed = 0;
  // Optimizer steps between history rows; 0 logs only the final step.  Rows
  // with labeled documents carry Hungarian-mapped accuracy; DBI is blank until
  // at least two clusters are in use.
  size_t eval_every = 0;
  std::vector<size_t> tracked_instances;  // indices into the pair list
  std::string checkpoint_path;            // empty = no checkpoint written
  OptimizerKind optimizer = OptimizerKind::sgd;
  double adam_beta1 = 0.9, adam_beta2 = 0.999, adam_eps = 1e-8;
  void validate() const;
};

struct TrackSample {
  size_t pair_index = 0;
  double similarity = 0.0;
  std::vector<double> p_a, p_b;
};

struct HistoryPoint {
  size_t step = 0;
  double mean_cost = 0.0;            // mean SE cost since the previous row
  std::optional<double> accuracy;    // absent when no gold labels
  std::optional<double> dbi;         // absent when fewer than 2 clusters used
  double hidden_mean = 0.0, hidden_max = 0.0;
  std::vector<TrackSample> tracked;
};

struct TrainHistory {
  std::vector<HistoryPoint> points;
  void write_csv(const std::string& path) const;
  // One file per tracked pair: <prefix><pair_index>.csv
  void write_tracked_csv(const std::string& prefix) const;
};

// Thrown when the loss turns non-finite; carries the failing optimizer step.
struct DivergenceError : std::runtime_error {
  DivergenceError(size_t step_, const std::string& what_);
  size_t step;
};

struct TrainState {
  diffcore::ParamSet params;
  std::string optimizer_state_json;
  size_t step = 0;
};

struct TrainResult {
  diffcore::ParamSet params;
  TrainHistory history;
  size_t steps = 0;
  std::string optimizer_state_json;
};

// Shuffles the pair order each epoch with a stream derived from
// (shuffle_seed, epoch), so a run resumed from any step replays the exact
// instance order of an uninterrupted run.  Batch gradients are averaged.
TrainResult train(const corpus::Corpus& c, const std::vector<pairing::PairInstance>& pairs,
                  const encoder::EncoderConfig& enc_cfg, const TrainConfig& cfg,
                  const corpus::EmbeddingTable* embeddings = nullptr,
                  const corpus::Vocabulary* vocab = nullptr,
                  const TrainState* resume = nullptr,
                  size_t max_sentence_len = 64);

// Clustering report over the labeled documents of `c` (throws if none).
eval::ClusteringReport evaluate_checkpoint(const encoder::EncoderConfig& cfg,
                                           const diffcore::ParamSet& params,
                                           const corpus::Corpus& c);

std::vector<TrackSample> track_instances(const encoder::EncoderConfig& cfg,
                                         const diffcore::ParamSet& params,
                                         const std::vector<pairing::PairInstance>& pairs,
                                         const std::vector<size_t>& indices);

struct Checkpoint {
  encoder::EncoderConfig config;
  diffcore::ParamSet params;
  std::vector<std::string> vocab;    // id -> token; empty when not recorded
  std::string optimizer_state_json;  // empty when not recorded
  size_t step = 0;
  size_t max_sentence_len = 64;
};
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace pairclust::trainer
