// Encoder hot paths: single-sentence forward, pair forward, and the full
// forward+backward used by every optimizer step.

#include <benchmark/benchmark.h>

#include "pairclust/encoder.hpp"
#include "pairclust/pairing.hpp"
#include "pairclust/rng.hpp"

using namespace pairclust;

namespace {

encoder::EncoderConfig make_config(size_t hidden, size_t layers) {
  encoder::EncoderConfig cfg;
  cfg.vocab_size = 2000;
  cfg.embedding_dim = 32;
  cfg.hidden_size = hidden;
  cfg.num_layers = layers;
  cfg.num_categories = 4;
  cfg.freeze_embeddings = false;
  cfg.init_seed = 17;
  return cfg;
}

std::vector<int> make_seq(const encoder::EncoderConfig& cfg, size_t len, uint64_t seed) {
  Rng rng(seed);
  std::vector<int> seq(len);
  for (auto& t : seq) t = int(rng.uniform_index(cfg.vocab_size));
  return seq;
}

void BM_encode(benchmark::State& state) {
  const auto cfg = make_config(size_t(state.range(0)), size_t(state.range(1)));
  const auto params = encoder::init_params(cfg);
  const auto seq = make_seq(cfg, 20, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(encoder::encode(cfg, params, seq));
  }
  state.SetLabel("len=20");
}
BENCHMARK(BM_encode)->Args({32, 1})->Args({64, 1})->Args({256, 1})->Args({256, 2});

void BM_pair_forward(benchmark::State& state) {
  const auto cfg = make_config(size_t(state.range(0)), 1);
  const auto params = encoder::init_params(cfg);
  pairing::PairInstance pair;
  pair.seq_a = make_seq(cfg, 20, 1);
  pair.seq_b = make_seq(cfg, 20, 2);
  pair.label = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(encoder::pair_forward(cfg, params, pair));
  }
}
BENCHMARK(BM_pair_forward)->Arg(32)->Arg(64)->Arg(256);

void BM_pair_backward(benchmark::State& state) {
  const auto cfg = make_config(size_t(state.range(0)), size_t(state.range(1)));
  auto params = encoder::init_params(cfg);
  pairing::PairInstance pair;
  pair.seq_a = make_seq(cfg, 20, 1);
  pair.seq_b = make_seq(cfg, 20, 2);
  pair.label = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(encoder::pair_backward(cfg, params, pair));
    params.zero_grads();
  }
}
BENCHMARK(BM_pair_backward)->Args({32, 1})->Args({64, 1})->Args({256, 1})->Args({256, 2});

}  // namespace
