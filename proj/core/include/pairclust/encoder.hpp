#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pairclust/corpus.hpp"
#include "pairclust/gradcheck.hpp"
#include "pairclust/pairing.hpp"
#include "pairclust/params.hpp"

namespace pairclust::encoder {

using diffcore::ParamSet;
using diffcore::Tensor;

struct EncoderConfig {
  size_t vocab_size = 0;
  size_t embedding_dim = 300;
  size_t hidden_size = 256;
  size_t num_layers = 1;
  size_t num_categories = 2;
  bool freeze_embeddings = true;
  uint64_t init_seed = 0;
  void validate() const;
  std::string to_json() const;
  static EncoderConfig from_json(const std::string& text);
};

// Parameter names: "emb"; per layer L and direction d in {fwd,bwd}:
// "l<L>.<d>.{W,U,b}_{i,f,o,c}"; output head "out.W" (2H x K), "out.b".
// Weights start uniform(-0.1, 0.1), forget-gate biases at 1.0, other biases 0.
// When `embeddings` is null the embedding rows are drawn from the same
// distribution; otherwise the table is copied and its frozen flag must agree
// with cfg.freeze_embeddings.
ParamSet init_params(const EncoderConfig& cfg,
                     const corpus::EmbeddingTable* embeddings = nullptr);

// One LSTM direction's weights, gate order i, f, o, c.
struct LstmWeights {
  const Tensor* W[4];
  const Tensor* U[4];
  const Tensor* b[4];
};
LstmWeights lstm_weights(const ParamSet& params, size_t layer, bool forward_dir);

// i = sig(W_i x + U_i h + b_i)   f = sig(W_f x + U_f h + b_f)
// o = sig(W_o x + U_o h + b_o)   g = tanh(W_c x + U_c h + b_c)
// c_t = f . c_prev + i . g        h_t = o . tanh(c_t)
void lstm_cell(const LstmWeights& w, const Tensor& x, const Tensor& h_prev,
               const Tensor& c_prev, Tensor& h_out, Tensor& c_out);

// Mean/max of top-layer hidden activations seen during forward passes.
struct ActivationStats {
  double sum = 0.0;
  double max = 0.0;
  size_t count = 0;
  void observe(const Tensor& t);
  double mean() const { return count ? sum / double(count) : 0.0; }
};

// Full branch: embedding -> stacked BiLSTM -> temporal max pool -> linear
// head -> softmax.  Returns the category distribution for one sentence.
Tensor encode(const EncoderConfig& cfg, const ParamSet& params,
              std::span<const int> tokens, ActivationStats* stats = nullptr);

struct PairResult {
  Tensor p_a, p_b;
  double similarity = 0.0;
  double loss = 0.0;
};
PairResult pair_forward(const EncoderConfig& cfg, const ParamSet& params,
                        const pairing::PairInstance& pair);
// Forward plus gradient accumulation into params (shared weights get both
// branches' contributions; frozen embedding gradients stay zero).
PairResult pair_backward(const EncoderConfig& cfg, ParamSet& params,
                         const pairing::PairInstance& pair,
                         ActivationStats* stats = nullptr);

struct Inference {
  Tensor distribution;
  int cluster = 0;
};
Inference infer_sentence(const EncoderConfig& cfg, const ParamSet& params,
                         std::span<const int> tokens);
// Document distribution = unweighted mean over all its sentence distributions.
Inference infer_document(const EncoderConfig& cfg, const ParamSet& params,
                         const corpus::Document& doc);

Tensor average_distributions(const std::vector<Tensor>& dists);
int argmax_lowest(const Tensor& v);  // ties resolve to the lowest index

// Whole-model finite-difference check.  With randomize_shapes the per-case
// dimensions sweep hidden {1..4}, categories {2,3}, layers {1,2}, sequence
// lengths 1..max_len; embeddings are trainable so their gradients are covered.
// Cases whose pooling margin is within 10*eps of a tie are redrawn.
struct ModelGradCheckConfig {
  size_t cases = 100;
  size_t max_len = 5;
  double eps = 1e-4;
  uint64_t seed = 0;
  bool randomize_shapes = true;
  EncoderConfig base;  // used when randomize_shapes is false
};
diffcore::GradCheckReport model_grad_check(const ModelGradCheckConfig& cfg);

}  // namespace pairclust::encoder
