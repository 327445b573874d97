#include "pairclust/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "pairclust/rng.hpp"

namespace pairclust::trainer {

using nlohmann::json;

OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "sgd") return OptimizerKind::sgd;
  if (name == "adam") return OptimizerKind::adam;
  throw std::invalid_argument("unknown optimizer: " + name);
}

std::string optimizer_name(OptimizerKind k) {
  return k == OptimizerKind::sgd ? "sgd" : "adam";
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw std::invalid_argument("learning_rate must be positive");
  if (l2 < 0.0 || !std::isfinite(l2))
    throw std::invalid_argument("l2 must be non-negative");
  if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0))
    throw std::invalid_argument("adam betas must lie in [0, 1)");
  if (!(adam_eps > 0.0)) throw std::invalid_argument("adam_eps must be positive");
}

DivergenceError::DivergenceError(size_t step_, const std::string& what_)
    : std::runtime_error(what_), step(step_) {}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

diffcore::OptimizerConfig optimizer_config(const TrainConfig& cfg) {
  diffcore::OptimizerConfig oc;
  oc.kind = cfg.optimizer == OptimizerKind::adam ? diffcore::OptimizerConfig::Kind::adam
                                                 : diffcore::OptimizerConfig::Kind::sgd;
  oc.lr = cfg.learning_rate;
  oc.l2 = cfg.l2;
  oc.beta1 = cfg.adam_beta1;
  oc.beta2 = cfg.adam_beta2;
  oc.eps = cfg.adam_eps;
  return oc;
}

}  // namespace

void TrainHistory::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write history: " + path);
  out << "step,mean_cost,accuracy,dbi,hidden_mean,hidden_max\n";
  for (const auto& p : points) {
    out << p.step << ',' << fmt(p.mean_cost) << ',';
    if (p.accuracy) out << fmt(*p.accuracy);
    out << ',';
    if (p.dbi) out << fmt(*p.dbi);
    out << ',' << fmt(p.hidden_mean) << ',' << fmt(p.hidden_max) << '\n';
  }
}

void TrainHistory::write_tracked_csv(const std::string& prefix) const {
  std::map<size_t, std::vector<std::pair<size_t, const TrackSample*>>> by_pair;
  for (const auto& p : points)
    for (const auto& s : p.tracked) by_pair[s.pair_index].push_back({p.step, &s});
  for (const auto& [idx, rows] : by_pair) {
    const std::string path = prefix + std::to_string(idx) + ".csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tracked history: " + path);
    out << "step,similarity,p_a,p_b\n";
    for (const auto& [step, s] : rows) {
      out << step << ',' << fmt(s->similarity) << ',';
      for (size_t k = 0; k < s->p_a.size(); ++k) out << (k ? " " : "") << fmt(s->p_a[k]);
      out << ',';
      for (size_t k = 0; k < s->p_b.size(); ++k) out << (k ? " " : "") << fmt(s->p_b[k]);
      out << '\n';
    }
  }
}

eval::ClusteringReport evaluate_checkpoint(const encoder::EncoderConfig& cfg,
                                           const diffcore::ParamSet& params,
                                           const corpus::Corpus& c) {
  std::vector<int> gold, predicted;
  std::vector<std::vector<double>> dists;
  for (const auto& doc : c.documents) {
    if (!doc.gold_label) continue;
    const encoder::Inference inf = encoder::infer_document(cfg, params, doc);
    gold.push_back(*doc.gold_label);
    predicted.push_back(inf.cluster);
    dists.push_back(inf.distribution.values());
  }
  if (gold.empty())
    throw std::invalid_argument("evaluate_checkpoint: corpus has no labeled documents");
  return eval::report(gold, predicted, dists);
}

std::vector<TrackSample> track_instances(const encoder::EncoderConfig& cfg,
                                         const diffcore::ParamSet& params,
                                         const std::vector<pairing::PairInstance>& pairs,
                                         const std::vector<size_t>& indices) {
  std::vector<TrackSample> out;
  out.reserve(indices.size());
  for (const size_t i : indices) {
    if (i >= pairs.size())
      throw std::invalid_argument("track_instances: pair index out of range");
    const encoder::PairResult r = encoder::pair_forward(cfg, params, pairs[i]);
    out.push_back({i, r.similarity, r.p_a.values(), r.p_b.values()});
  }
  return out;
}

TrainResult train(const corpus::Corpus& c, const std::vector<pairing::PairInstance>& pairs,
                  const encoder::EncoderConfig& enc_cfg, const TrainConfig& cfg,
                  const corpus::EmbeddingTable* embeddings,
                  const corpus::Vocabulary* vocab, const TrainState* resume,
                  size_t max_sentence_len) {
  cfg.validate();
  enc_cfg.validate();
  if (pairs.empty()) throw std::invalid_argument("train: no training pairs");

  const size_t n = pairs.size();
  const size_t steps_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
  const size_t total_steps = cfg.epochs * steps_per_epoch;

  diffcore::ParamSet params =
      resume ? resume->params : encoder::init_params(enc_cfg, embeddings);
  diffcore::Optimizer opt(optimizer_config(cfg));
  if (resume && !resume->optimizer_state_json.empty())
    opt.state_from_json(resume->optimizer_state_json, params);

  const bool has_labels = [&] {
    for (const auto& d : c.documents)
      if (d.gold_label) return true;
    return false;
  }();

  TrainResult result{std::move(params), {}, 0, {}};
  size_t step = resume ? resume->step : 0;
  if (step > total_steps)
    throw std::invalid_argument("train: resume step exceeds the configured schedule");

  double cost_sum = 0.0;
  size_t cost_count = 0;
  encoder::ActivationStats stats;
  size_t last_logged = step;

  auto emit_row = [&](size_t at_step) {
    HistoryPoint hp;
    hp.step = at_step;
    hp.mean_cost = cost_count ? cost_sum / double(cost_count) : 0.0;
    if (has_labels) {
      const eval::ClusteringReport rep = evaluate_checkpoint(enc_cfg, result.params, c);
      hp.accuracy = rep.scores.accuracy;
      if (!std::isnan(rep.dbi)) hp.dbi = rep.dbi;
    }
    hp.hidden_mean = stats.mean();
    hp.hidden_max = stats.max;
    if (!cfg.tracked_instances.empty())
      hp.tracked = track_instances(enc_cfg, result.params, pairs, cfg.tracked_instances);
    result.history.points.push_back(std::move(hp));
    cost_sum = 0.0;
    cost_count = 0;
    stats = encoder::ActivationStats{};
    last_logged = at_step;
  };

  std::vector<size_t> perm(n);
  size_t perm_epoch = size_t(-1);
  while (step < total_steps) {
    const size_t epoch = step / steps_per_epoch;
    if (epoch != perm_epoch) {
      for (size_t i = 0; i < n; ++i) perm[i] = i;
      Rng order_rng(Rng::mix(cfg.shuffle_seed, epoch));
      order_rng.shuffle(perm);
      perm_epoch = epoch;
    }
    const size_t batch = step % steps_per_epoch;
    const size_t lo = batch * cfg.batch_size;
    const size_t hi = std::min(n, lo + cfg.batch_size);

    double batch_cost = 0.0;
    for (size_t i = lo; i < hi; ++i) {
      const encoder::PairResult r =
          encoder::pair_backward(enc_cfg, result.params, pairs[perm[i]], &stats);
      batch_cost += r.loss;
    }
    const double count = double(hi - lo);
    batch_cost /= count;
    result.params.scale_grads(1.0 / count);
    ++step;
    if (!std::isfinite(batch_cost) || !result.params.grads_all_finite())
      throw DivergenceError(step, "training diverged: non-finite cost at step " +
                                      std::to_string(step));
    opt.step(result.params);

    cost_sum += batch_cost * count;
    cost_count += size_t(count);
    if (cfg.eval_every > 0 && step % cfg.eval_every == 0) emit_row(step);
  }
  if (step > last_logged && cost_count > 0) emit_row(step);

  result.steps = step;
  result.optimizer_state_json = opt.state_to_json();

  if (!cfg.checkpoint_path.empty()) {
    Checkpoint ckpt{enc_cfg,
                    result.params,
                    vocab ? vocab->tokens() : std::vector<std::string>{},
                    result.optimizer_state_json,
                    step,
                    max_sentence_len};
    save_checkpoint(cfg.checkpoint_path, ckpt);
  }
  return result;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  json j;
  j["format"] = "pairclust-checkpoint";
  j["version"] = 1;
  j["config"] = json::parse(ckpt.config.to_json());
  j["params"] = json::parse(ckpt.params.to_json());
  j["vocab"] = ckpt.vocab;
  if (ckpt.optimizer_state_json.empty())
    j["optimizer_state"] = nullptr;
  else
    j["optimizer_state"] = json::parse(ckpt.optimizer_state_json);
  j["step"] = ckpt.step;
  j["max_sentence_len"] = ckpt.max_sentence_len;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << j.dump();
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed checkpoint " + path + ": " + e.what());
  }
  if (!j.contains("format") || j["format"] != "pairclust-checkpoint")
    throw std::runtime_error("not a checkpoint file: " + path);
  Checkpoint ckpt{encoder::EncoderConfig::from_json(j.at("config").dump()),
                  diffcore::ParamSet::from_json(j.at("params").dump()),
                  {},
                  {},
                  0,
                  64};
  ckpt.vocab = j.value("vocab", std::vector<std::string>{});
  if (j.contains("optimizer_state") && !j["optimizer_state"].is_null())
    ckpt.optimizer_state_json = j["optimizer_state"].dump();
  ckpt.step = j.value("step", size_t(0));
  ckpt.max_sentence_len = j.value("max_sentence_len", size_t(64));
  return ckpt;
}

}  // namespace pairclust::trainer
