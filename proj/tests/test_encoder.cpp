#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pairclust/corpus.hpp"
#include "pairclust/encoder.hpp"
#include "pairclust/rng.hpp"

using namespace pairclust;
using diffcore::ParamSet;
using diffcore::Tensor;

// ---------------------------------------------------------------------------
// Reference implementation of the full branch, written as plain nested loops
// against the documented parameter layout.  It shares nothing with the
// library's graph code beyond the parameter names.
namespace naive {

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

const Tensor& p(const ParamSet& ps, const std::string& name) {
  return ps.at(name).value;
}

std::string wname(size_t layer, const char* dir, const char* kind, char gate) {
  return "l" + std::to_string(layer) + "." + dir + "." + kind + "_" + gate;
}

// One direction over inputs given in processing order; returns h per step.
std::vector<std::vector<double>> run_dir(const ParamSet& ps, size_t layer,
                                         const char* dir,
                                         const std::vector<std::vector<double>>& xs,
                                         size_t H) {
  const char gates[4] = {'i', 'f', 'o', 'c'};
  std::vector<double> h(H, 0.0), c(H, 0.0);
  std::vector<std::vector<double>> hs;
  for (const auto& x : xs) {
    std::vector<double> pre[4];
    for (int k = 0; k < 4; ++k) {
      const Tensor& W = p(ps, wname(layer, dir, "W", gates[k]));
      const Tensor& U = p(ps, wname(layer, dir, "U", gates[k]));
      const Tensor& b = p(ps, wname(layer, dir, "b", gates[k]));
      pre[k].assign(H, 0.0);
      for (size_t r = 0; r < H; ++r) {
        double a = b[r];
        for (size_t col = 0; col < x.size(); ++col) a += W.at(r, col) * x[col];
        for (size_t col = 0; col < H; ++col) a += U.at(r, col) * h[col];
        pre[k][r] = a;
      }
    }
    std::vector<double> h_new(H), c_new(H);
    for (size_t r = 0; r < H; ++r) {
      const double iv = sig(pre[0][r]);
      const double fv = sig(pre[1][r]);
      const double ov = sig(pre[2][r]);
      const double gv = std::tanh(pre[3][r]);
      c_new[r] = fv * c[r] + iv * gv;
      h_new[r] = ov * std::tanh(c_new[r]);
    }
    h = h_new;
    c = c_new;
    hs.push_back(h);
  }
  return hs;
}

std::vector<double> encode_probs(const encoder::EncoderConfig& cfg,
                                 const ParamSet& ps, const std::vector<int>& toks) {
  const size_t T = toks.size();
  const size_t H = cfg.hidden_size;
  const Tensor& emb = p(ps, "emb");

  std::vector<std::vector<double>> inputs(T);
  for (size_t t = 0; t < T; ++t)
    inputs[t].assign(emb.row(size_t(toks[t])), emb.row(size_t(toks[t])) + cfg.embedding_dim);

  for (size_t layer = 0; layer < cfg.num_layers; ++layer) {
    std::vector<std::vector<double>> rev(inputs.rbegin(), inputs.rend());
    const auto hf = run_dir(ps, layer, "fwd", inputs, H);
    const auto hb = run_dir(ps, layer, "bwd", rev, H);
    std::vector<std::vector<double>> cat(T);
    for (size_t t = 0; t < T; ++t) {
      cat[t] = hf[t];
      // backward step T-1-t consumed the original position t
      cat[t].insert(cat[t].end(), hb[T - 1 - t].begin(), hb[T - 1 - t].end());
    }
    inputs = std::move(cat);
  }

  std::vector<double> pooled(2 * H, -1e300);
  for (size_t t = 0; t < T; ++t)
    for (size_t d = 0; d < 2 * H; ++d) pooled[d] = std::max(pooled[d], inputs[t][d]);

  const Tensor& W = p(ps, "out.W");
  const Tensor& b = p(ps, "out.b");
  std::vector<double> logits(cfg.num_categories);
  for (size_t k = 0; k < cfg.num_categories; ++k) {
    double a = b[k];
    for (size_t d = 0; d < 2 * H; ++d) a += pooled[d] * W.at(d, k);
    logits[k] = a;
  }
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double z = 0.0;
  std::vector<double> probs(logits.size());
  for (size_t k = 0; k < probs.size(); ++k) {
    probs[k] = std::exp(logits[k] - mx);
    z += probs[k];
  }
  for (double& v : probs) v /= z;
  return probs;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace naive

namespace {

encoder::EncoderConfig small_cfg(size_t layers = 1, size_t H = 3, size_t K = 2,
                                 size_t E = 3, size_t vocab = 6, uint64_t seed = 42) {
  encoder::EncoderConfig cfg;
  cfg.vocab_size = vocab;
  cfg.embedding_dim = E;
  cfg.hidden_size = H;
  cfg.num_layers = layers;
  cfg.num_categories = K;
  cfg.freeze_embeddings = false;
  cfg.init_seed = seed;
  return cfg;
}

std::vector<int> random_seq(Rng& rng, size_t vocab, size_t len) {
  std::vector<int> s(len);
  for (auto& t : s) t = int(rng.uniform_index(vocab));
  return s;
}

// Central finite differences over every trainable element, comparing against
// the analytic gradients that pair_backward left in `params`.  Returns the
// largest absolute deviation; independent of the library's own checker.
double max_abs_fd_err(const encoder::EncoderConfig& cfg, ParamSet& params,
                      const pairing::PairInstance& pair, double eps) {
  params.zero_grads();
  encoder::pair_backward(cfg, params, pair);
  double worst = 0.0;
  for (auto& item : params.items()) {
    if (!item.trainable) continue;
    for (size_t i = 0; i < item.value.size(); ++i) {
      const double saved = item.value[i];
      item.value[i] = saved + eps;
      const double up = encoder::pair_forward(cfg, params, pair).loss;
      item.value[i] = saved - eps;
      const double dn = encoder::pair_forward(cfg, params, pair).loss;
      item.value[i] = saved;
      const double numeric = (up - dn) / (2.0 * eps);
      worst = std::max(worst, std::fabs(numeric - item.grad[i]));
    }
  }
  return worst;
}

}  // namespace

TEST_SUITE("encoder") {

TEST_CASE("config validation and JSON round-trip") {
  auto cfg = small_cfg();
  CHECK_NOTHROW(cfg.validate());
  auto back = encoder::EncoderConfig::from_json(cfg.to_json());
  CHECK(back.vocab_size == cfg.vocab_size);
  CHECK(back.embedding_dim == cfg.embedding_dim);
  CHECK(back.hidden_size == cfg.hidden_size);
  CHECK(back.num_layers == cfg.num_layers);
  CHECK(back.num_categories == cfg.num_categories);
  CHECK(back.freeze_embeddings == cfg.freeze_embeddings);
  CHECK(back.init_seed == cfg.init_seed);

  auto bad = cfg;
  bad.num_categories = 1;
  CHECK_THROWS(bad.validate());
  bad = cfg;
  bad.hidden_size = 0;
  CHECK_THROWS(bad.validate());
  bad = cfg;
  bad.vocab_size = 0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("init_params lays out every tensor with documented shapes") {
  auto cfg = small_cfg(2, 4, 3, 5, 7);
  const auto params = encoder::init_params(cfg);

  REQUIRE(params.has("emb"));
  const auto& emb = params.at("emb");
  CHECK(emb.value.rows() == 7);
  CHECK(emb.value.cols() == 5);
  CHECK(emb.trainable);

  for (size_t layer = 0; layer < 2; ++layer) {
    const size_t in_dim = layer == 0 ? 5 : 8;
    for (const char* dir : {"fwd", "bwd"})
      for (const char g : {'i', 'f', 'o', 'c'}) {
        const auto& W = params.at(naive::wname(layer, dir, "W", g)).value;
        CHECK(W.rows() == 4);
        CHECK(W.cols() == in_dim);
        const auto& U = params.at(naive::wname(layer, dir, "U", g)).value;
        CHECK(U.rows() == 4);
        CHECK(U.cols() == 4);
        const auto& b = params.at(naive::wname(layer, dir, "b", g)).value;
        CHECK(b.size() == 4);
        for (size_t i = 0; i < b.size(); ++i)
          CHECK(b[i] == (g == 'f' ? 1.0 : 0.0));
      }
  }
  const auto& W = params.at("out.W").value;
  CHECK(W.rows() == 8);
  CHECK(W.cols() == 3);
  CHECK(params.at("out.b").value.size() == 3);

  // Weights live in the init interval; biases are excluded above.
  for (const auto& item : params.items()) {
    if (item.name.find(".b_") != std::string::npos || item.name == "out.b") continue;
    for (size_t i = 0; i < item.value.size(); ++i) {
      CHECK(item.value[i] >= -0.1);
      CHECK(item.value[i] < 0.1);
    }
  }

  // Same seed, same draws; different seed diverges.
  CHECK(encoder::init_params(cfg).same_values(params));
  auto other = cfg;
  other.init_seed = cfg.init_seed + 1;
  CHECK_FALSE(encoder::init_params(other).same_values(params));
}

TEST_CASE("init_params copies a provided embedding table") {
  auto cfg = small_cfg();
  cfg.freeze_embeddings = true;
  corpus::EmbeddingTable table;
  table.vocab_size = cfg.vocab_size;
  table.dim = cfg.embedding_dim;
  table.frozen = true;
  table.data.resize(table.vocab_size * table.dim);
  for (size_t i = 0; i < table.data.size(); ++i) table.data[i] = 0.01 * double(i);

  const auto params = encoder::init_params(cfg, &table);
  const auto& emb = params.at("emb");
  CHECK_FALSE(emb.trainable);
  for (size_t i = 0; i < table.data.size(); ++i) CHECK(emb.value[i] == table.data[i]);

  corpus::EmbeddingTable wrong = table;
  wrong.dim += 1;
  wrong.data.resize(wrong.vocab_size * wrong.dim);
  CHECK_THROWS(encoder::init_params(cfg, &wrong));

  corpus::EmbeddingTable thawed = table;
  thawed.frozen = false;  // disagrees with cfg.freeze_embeddings
  CHECK_THROWS(encoder::init_params(cfg, &thawed));
}

TEST_CASE("encode matches the loop-level reference on random cases") {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const size_t layers = 1 + rng.uniform_index(2);
    const size_t H = 1 + rng.uniform_index(4);
    const size_t K = 2 + rng.uniform_index(3);
    const size_t E = 1 + rng.uniform_index(4);
    const size_t vocab = 4 + rng.uniform_index(6);
    auto cfg = small_cfg(layers, H, K, E, vocab, rng.next_u64());
    const auto params = encoder::init_params(cfg);
    const auto toks = random_seq(rng, vocab, 1 + rng.uniform_index(6));

    const Tensor got = encoder::encode(cfg, params, toks);
    const auto want = naive::encode_probs(cfg, params, toks);
    REQUIRE(got.size() == want.size());
    for (size_t k = 0; k < want.size(); ++k)
      CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-12));
  }
}

TEST_CASE("single-step sequence reduces to one lstm_cell per direction") {
  auto cfg = small_cfg(1, 4, 3, 3, 5, 7);
  const auto params = encoder::init_params(cfg);
  const std::vector<int> toks = {2};

  Tensor x(cfg.embedding_dim);
  const double* row = params.at("emb").value.row(2);
  std::copy(row, row + cfg.embedding_dim, x.data());
  const Tensor zero(cfg.hidden_size);
  Tensor hf, cf, hb, cb;
  encoder::lstm_cell(encoder::lstm_weights(params, 0, true), x, zero, zero, hf, cf);
  encoder::lstm_cell(encoder::lstm_weights(params, 0, false), x, zero, zero, hb, cb);

  // With T = 1 the pooled vector is exactly [h_fwd ; h_bwd].
  const auto& W = params.at("out.W").value;
  const auto& b = params.at("out.b").value;
  std::vector<double> logits(cfg.num_categories);
  for (size_t k = 0; k < cfg.num_categories; ++k) {
    double a = b[k];
    for (size_t d = 0; d < cfg.hidden_size; ++d) a += hf[d] * W.at(d, k);
    for (size_t d = 0; d < cfg.hidden_size; ++d)
      a += hb[d] * W.at(cfg.hidden_size + d, k);
    logits[k] = a;
  }
  double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  std::vector<double> want(logits.size());
  for (size_t k = 0; k < want.size(); ++k) {
    want[k] = std::exp(logits[k] - mx);
    z += want[k];
  }
  const Tensor got = encoder::encode(cfg, params, toks);
  for (size_t k = 0; k < want.size(); ++k)
    CHECK(got[k] == doctest::Approx(want[k] / z).epsilon(1e-12));
}

TEST_CASE("lstm_cell validates state and input sizes") {
  auto cfg = small_cfg();
  const auto params = encoder::init_params(cfg);
  const auto w = encoder::lstm_weights(params, 0, true);
  Tensor h, c;
  CHECK_THROWS(encoder::lstm_cell(w, Tensor(cfg.embedding_dim + 1),
                                  Tensor(cfg.hidden_size), Tensor(cfg.hidden_size), h, c));
  CHECK_THROWS(encoder::lstm_cell(w, Tensor(cfg.embedding_dim),
                                  Tensor(cfg.hidden_size + 1), Tensor(cfg.hidden_size), h, c));
}

TEST_CASE("encode output is a distribution and deterministic") {
  auto cfg = small_cfg(2, 5, 4, 4, 9, 11);
  const auto params = encoder::init_params(cfg);
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto toks = random_seq(rng, cfg.vocab_size, 1 + rng.uniform_index(7));
    const Tensor p = encoder::encode(cfg, params, toks);
    REQUIRE(p.size() == 4);
    double sum = 0.0;
    for (size_t k = 0; k < p.size(); ++k) {
      CHECK(p[k] > 0.0);
      CHECK(p[k] < 1.0);
      sum += p[k];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(encoder::encode(cfg, params, toks) == p);
  }
}

TEST_CASE("encode rejects empty and out-of-vocabulary sequences") {
  auto cfg = small_cfg();
  const auto params = encoder::init_params(cfg);
  CHECK_THROWS(encoder::encode(cfg, params, std::vector<int>{}));
  CHECK_THROWS(encoder::encode(cfg, params, std::vector<int>{0, int(cfg.vocab_size)}));
  CHECK_THROWS(encoder::encode(cfg, params, std::vector<int>{-1}));
}

TEST_CASE("activation stats cover every top-layer step") {
  auto cfg = small_cfg(1, 3, 2, 3, 6, 5);
  const auto params = encoder::init_params(cfg);
  encoder::ActivationStats stats;
  const std::vector<int> toks = {1, 2, 3, 4};
  encoder::encode(cfg, params, toks, &stats);
  CHECK(stats.count == toks.size() * 2 * cfg.hidden_size);
  CHECK(stats.max <= 1.0);   // tanh-bounded hidden activations
  CHECK(stats.max >= -1.0);
  CHECK(std::fabs(stats.mean()) <= 1.0);
}

TEST_CASE("pair_forward: cosine similarity of the two branch outputs") {
  auto cfg = small_cfg(1, 4, 3, 3, 8, 13);
  const auto params = encoder::init_params(cfg);
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    pairing::PairInstance pair;
    pair.seq_a = random_seq(rng, cfg.vocab_size, 1 + rng.uniform_index(5));
    pair.seq_b = random_seq(rng, cfg.vocab_size, 1 + rng.uniform_index(5));
    pair.label = int(rng.uniform_index(2));
    const auto r = encoder::pair_forward(cfg, params, pair);

    const std::vector<double> pa(r.p_a.data(), r.p_a.data() + r.p_a.size());
    const std::vector<double> pb(r.p_b.data(), r.p_b.data() + r.p_b.size());
    CHECK(r.similarity == doctest::Approx(naive::cosine(pa, pb)).epsilon(1e-12));
    CHECK(r.similarity >= 0.0);  // probability vectors: no negative coordinates
    CHECK(r.similarity <= 1.0 + 1e-12);
    CHECK(r.loss == (r.similarity - double(pair.label)) * (r.similarity - double(pair.label)));
    CHECK(r.loss >= 0.0);
    CHECK(r.loss <= 1.0 + 1e-12);

    // The branches share every parameter, so swapping the sequences swaps the
    // outputs and leaves similarity and loss unchanged.
    pairing::PairInstance swapped = pair;
    std::swap(swapped.seq_a, swapped.seq_b);
    const auto s = encoder::pair_forward(cfg, params, swapped);
    CHECK(s.similarity == r.similarity);
    CHECK(s.loss == r.loss);
    CHECK(s.p_a == r.p_b);
    CHECK(s.p_b == r.p_a);
  }
}

TEST_CASE("identical sequences give similarity 1 and label-1 loss 0") {
  auto cfg = small_cfg();
  const auto params = encoder::init_params(cfg);
  pairing::PairInstance pair;
  pair.seq_a = {1, 2, 3};
  pair.seq_b = {1, 2, 3};
  pair.label = 1;
  const auto r = encoder::pair_forward(cfg, params, pair);
  CHECK(r.similarity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.loss == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("analytic gradients match finite differences in absolute terms") {
  // Healthy-gradient regime: label 0 against a near-1 similarity puts the loss
  // near its maximum, the exact region the relative-error harness excludes.
  Rng rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    auto cfg = small_cfg(1 + trial % 2, 3, 2, 3, 6, rng.next_u64());
    auto params = encoder::init_params(cfg);
    pairing::PairInstance pair;
    pair.seq_a = random_seq(rng, cfg.vocab_size, 3);
    pair.seq_b = random_seq(rng, cfg.vocab_size, 4);
    pair.label = 0;
    worst = std::max(worst, max_abs_fd_err(cfg, params, pair, 1e-4));
  }
  // Measured worst deviation is ~1.2e-7, which is central-difference
  // truncation at eps=1e-4; a wrong gradient term shows up at 1e-3 or worse.
  CHECK(worst < 5e-7);
}

TEST_CASE("gradients stay accurate when weights leave the init range") {
  // Scaled-up weights raise curvature; the absolute deviation bound still has
  // orders of magnitude of headroom.
  Rng rng(123);
  double worst = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    auto cfg = small_cfg(1, 3, 2, 3, 6, rng.next_u64());
    auto params = encoder::init_params(cfg);
    for (auto& item : params.items())
      if (item.name != "emb")
        for (size_t i = 0; i < item.value.size(); ++i) item.value[i] *= 5.0;
    pairing::PairInstance pair;
    pair.seq_a = random_seq(rng, cfg.vocab_size, 3);
    pair.seq_b = random_seq(rng, cfg.vocab_size, 3);
    pair.label = int(rng.uniform_index(2));
    worst = std::max(worst, max_abs_fd_err(cfg, params, pair, 1e-4));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("pair_backward leaves frozen embeddings untouched") {
  auto cfg = small_cfg();
  cfg.freeze_embeddings = true;
  auto params = encoder::init_params(cfg);
  CHECK_FALSE(params.at("emb").trainable);
  pairing::PairInstance pair;
  pair.seq_a = {0, 1};
  pair.seq_b = {2, 3};
  pair.label = 1;
  params.zero_grads();
  encoder::pair_backward(cfg, params, pair);
  const auto& g = params.at("emb").grad;
  for (size_t i = 0; i < g.size(); ++i) CHECK(g[i] == 0.0);
  // Shared weights received contributions from both branches.
  const auto& wg = params.at("out.W").grad;
  bool any = false;
  for (size_t i = 0; i < wg.size() && !any; ++i) any = wg[i] != 0.0;
  CHECK(any);
}

TEST_CASE("argmax_lowest breaks ties toward the lowest index") {
  CHECK(encoder::argmax_lowest(Tensor::vector({0.2, 0.5, 0.3})) == 1);
  CHECK(encoder::argmax_lowest(Tensor::vector({0.4, 0.4, 0.2})) == 0);
  CHECK(encoder::argmax_lowest(Tensor::vector({0.1, 0.3, 0.3, 0.3})) == 1);
  CHECK(encoder::argmax_lowest(Tensor::vector({7.0})) == 0);
  CHECK_THROWS(encoder::argmax_lowest(Tensor::vector({})));
}

TEST_CASE("average_distributions is the arithmetic mean") {
  const auto m = encoder::average_distributions(
      {Tensor::vector({0.2, 0.8}), Tensor::vector({0.6, 0.4})});
  CHECK(m[0] == doctest::Approx(0.4));
  CHECK(m[1] == doctest::Approx(0.6));
  CHECK_THROWS(encoder::average_distributions({}));
  CHECK_THROWS(encoder::average_distributions(
      {Tensor::vector({0.5, 0.5}), Tensor::vector({1.0})}));
}

TEST_CASE("document inference averages its sentence distributions") {
  auto cfg = small_cfg(1, 4, 3, 3, 10, 21);
  const auto params = encoder::init_params(cfg);

  corpus::Document doc;
  doc.id = "doc";
  doc.paragraphs = {{corpus::Sentence{{}, {1, 2, 3}}, corpus::Sentence{{}, {4, 5}}},
                    {corpus::Sentence{{}, {6, 7, 8, 9}}}};

  std::vector<Tensor> dists;
  for (const auto& para : doc.paragraphs)
    for (const auto& sent : para) dists.push_back(encoder::encode(cfg, params, sent.ids));
  const Tensor want = encoder::average_distributions(dists);

  const auto inf = encoder::infer_document(cfg, params, doc);
  REQUIRE(inf.distribution.size() == want.size());
  double sum = 0.0;
  for (size_t k = 0; k < want.size(); ++k) {
    CHECK(inf.distribution[k] == doctest::Approx(want[k]).epsilon(1e-12));
    CHECK(inf.distribution[k] >= 0.0);
    sum += inf.distribution[k];
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));  // convex mix of simplex points
  CHECK(inf.cluster == encoder::argmax_lowest(want));

  const auto single = encoder::infer_sentence(cfg, params, doc.paragraphs[0][0].ids);
  CHECK(single.distribution == dists[0]);
  CHECK(single.cluster == encoder::argmax_lowest(dists[0]));

  corpus::Document empty;
  empty.id = "empty";
  CHECK_THROWS(encoder::infer_document(cfg, params, empty));
  corpus::Document unencoded;
  unencoded.id = "raw";
  unencoded.paragraphs = {{corpus::Sentence{{"hi"}, {}}}};
  CHECK_THROWS(encoder::infer_document(cfg, params, unencoded));
}

TEST_CASE("model_grad_check passes on random small shapes") {
  encoder::ModelGradCheckConfig mc;
  mc.cases = 10;
  mc.max_len = 4;
  mc.eps = 1e-4;
  mc.seed = 5;
  const auto rep = encoder::model_grad_check(mc);
  CHECK(rep.passed(1e-4));
  CHECK_FALSE(rep.tensors.empty());

  // Fixed-shape mode exercises the supplied base configuration.
  encoder::ModelGradCheckConfig fixed;
  fixed.cases = 3;
  fixed.max_len = 3;
  fixed.seed = 6;
  fixed.randomize_shapes = false;
  fixed.base = small_cfg(2, 2, 3, 2, 6, 0);
  CHECK(encoder::model_grad_check(fixed).passed(1e-4));
}

}  // TEST_SUITE
