#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pairclust::cli {

// One declarative config file per run (JSON).  Seeds are always explicit:
// unset stage seeds are derived from the mandatory command-line master seed,
// never from the clock.

struct CorpusSection {
  std::string path;
  std::string format = "lines";
  std::string labels;  // optional gold labels TSV
  size_t min_count = 1;
  size_t max_vocab = 0;  // 0 = unbounded
  size_t max_sentence_len = 64;
};

struct EmbeddingSection {
  std::string source = "random";  // "random" | "file"
  std::string path;               // GloVe-style text file when source=file
  size_t dim = 32;
  bool frozen = true;
  std::optional<uint64_t> seed;  // missing tokens / random table
};

struct SamplerSection {
  std::string mode = "paragraph";
  double pos_ratio = 0.5;
  int min_negative_distance = 100;
  size_t num_instances = 0;
  std::optional<uint64_t> seed;
};

struct EncoderSection {
  size_t hidden_size = 256;
  size_t num_layers = 1;
  size_t num_categories = 2;
  std::optional<uint64_t> init_seed;
};

struct TrainSection {
  double learning_rate = 1e-3;
  double l2 = 1e-4;
  size_t epochs = 10;
  size_t batch_size = 32;
  std::optional<uint64_t> shuffle_seed;
  size_t eval_every = 0;
  std::string optimizer = "sgd";
  std::vector<size_t> tracked_instances;
};

struct RunConfig {
  CorpusSection corpus;
  EmbeddingSection embeddings;
  SamplerSection sampler;
  EncoderSection encoder;
  TrainSection train;
  std::string output_dir = ".";

  static RunConfig from_file(const std::string& path);
  static RunConfig from_json(const std::string& text);
  std::string to_json() const;

  // Fills unset stage seeds from the master seed; explicit config seeds win.
  void resolve_seeds(uint64_t master);
};

}  // namespace pairclust::cli
