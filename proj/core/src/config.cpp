#include "pairclust/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pairclust/rng.hpp"

namespace pairclust::cli {

using nlohmann::json;

namespace {

// Distinct derivation streams for per-stage seeds, so one master seed never
// feeds two stages the same generator.
enum : uint64_t { kStreamEmbeddings = 1, kStreamSampler = 2, kStreamEncoder = 3, kStreamShuffle = 4 };

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_seed(const json& j, const char* key, std::optional<uint64_t>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<uint64_t>();
}

// A misspelled key silently falling back to a default is the worst possible
// failure mode for an experiment config, so unknown keys are a hard error.
void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) { known = true; break; }
    if (!known)
      throw std::runtime_error("config: unknown key " +
                               (where.empty() ? "" : where + ".") + item.key());
  }
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return from_json(ss.str());
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed config " + path + ": " + e.what());
  }
}

RunConfig RunConfig::from_json(const std::string& text) {
  const json j = json::parse(text);
  RunConfig c;
  check_keys(j, "", {"corpus", "embeddings", "sampler", "encoder", "train",
                     "output_dir"});
  if (j.contains("corpus")) {
    const json& s = j.at("corpus");
    check_keys(s, "corpus", {"path", "format", "labels", "min_count",
                             "max_vocab", "max_sentence_len"});
    read_field(s, "path", c.corpus.path);
    read_field(s, "format", c.corpus.format);
    read_field(s, "labels", c.corpus.labels);
    read_field(s, "min_count", c.corpus.min_count);
    read_field(s, "max_vocab", c.corpus.max_vocab);
    read_field(s, "max_sentence_len", c.corpus.max_sentence_len);
  }
  if (j.contains("embeddings")) {
    const json& s = j.at("embeddings");
    check_keys(s, "embeddings", {"source", "path", "dim", "frozen", "seed"});
    read_field(s, "source", c.embeddings.source);
    read_field(s, "path", c.embeddings.path);
    read_field(s, "dim", c.embeddings.dim);
    read_field(s, "frozen", c.embeddings.frozen);
    read_seed(s, "seed", c.embeddings.seed);
  }
  if (j.contains("sampler")) {
    const json& s = j.at("sampler");
    check_keys(s, "sampler",
               {"mode", "pos_ratio", "min_negative_distance", "num_instances",
                "seed"});
    read_field(s, "mode", c.sampler.mode);
    read_field(s, "pos_ratio", c.sampler.pos_ratio);
    read_field(s, "min_negative_distance", c.sampler.min_negative_distance);
    read_field(s, "num_instances", c.sampler.num_instances);
    read_seed(s, "seed", c.sampler.seed);
  }
  if (j.contains("encoder")) {
    const json& s = j.at("encoder");
    check_keys(s, "encoder",
               {"hidden_size", "num_layers", "num_categories", "init_seed"});
    read_field(s, "hidden_size", c.encoder.hidden_size);
    read_field(s, "num_layers", c.encoder.num_layers);
    read_field(s, "num_categories", c.encoder.num_categories);
    read_seed(s, "init_seed", c.encoder.init_seed);
  }
  if (j.contains("train")) {
    const json& s = j.at("train");
    check_keys(s, "train",
               {"learning_rate", "l2", "epochs", "batch_size", "shuffle_seed",
                "eval_every", "optimizer", "tracked_instances"});
    read_field(s, "learning_rate", c.train.learning_rate);
    read_field(s, "l2", c.train.l2);
    read_field(s, "epochs", c.train.epochs);
    read_field(s, "batch_size", c.train.batch_size);
    read_seed(s, "shuffle_seed", c.train.shuffle_seed);
    read_field(s, "eval_every", c.train.eval_every);
    read_field(s, "optimizer", c.train.optimizer);
    read_field(s, "tracked_instances", c.train.tracked_instances);
  }
  read_field(j, "output_dir", c.output_dir);
  return c;
}

std::string RunConfig::to_json() const {
  json j;
  j["corpus"] = {{"path", corpus.path},
                 {"format", corpus.format},
                 {"labels", corpus.labels},
                 {"min_count", corpus.min_count},
                 {"max_vocab", corpus.max_vocab},
                 {"max_sentence_len", corpus.max_sentence_len}};
  j["embeddings"] = {{"source", embeddings.source},
                     {"path", embeddings.path},
                     {"dim", embeddings.dim},
                     {"frozen", embeddings.frozen}};
  if (embeddings.seed) j["embeddings"]["seed"] = *embeddings.seed;
  j["sampler"] = {{"mode", sampler.mode},
                  {"pos_ratio", sampler.pos_ratio},
                  {"min_negative_distance", sampler.min_negative_distance},
                  {"num_instances", sampler.num_instances}};
  if (sampler.seed) j["sampler"]["seed"] = *sampler.seed;
  j["encoder"] = {{"hidden_size", encoder.hidden_size},
                  {"num_layers", encoder.num_layers},
                  {"num_categories", encoder.num_categories}};
  if (encoder.init_seed) j["encoder"]["init_seed"] = *encoder.init_seed;
  j["train"] = {{"learning_rate", train.learning_rate},
                {"l2", train.l2},
                {"epochs", train.epochs},
                {"batch_size", train.batch_size},
                {"eval_every", train.eval_every},
                {"optimizer", train.optimizer},
                {"tracked_instances", train.tracked_instances}};
  if (train.shuffle_seed) j["train"]["shuffle_seed"] = *train.shuffle_seed;
  j["output_dir"] = output_dir;
  return j.dump(2);
}

void RunConfig::resolve_seeds(uint64_t master) {
  if (!embeddings.seed) embeddings.seed = Rng::mix(master, kStreamEmbeddings);
  if (!sampler.seed) sampler.seed = Rng::mix(master, kStreamSampler);
  if (!encoder.init_seed) encoder.init_seed = Rng::mix(master, kStreamEncoder);
  if (!train.shuffle_seed) train.shuffle_seed = Rng::mix(master, kStreamShuffle);
}

}  // namespace pairclust::cli
