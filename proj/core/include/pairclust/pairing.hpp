#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pairclust/corpus.hpp"
#include "pairclust/rng.hpp"

namespace pairclust::pairing {

// paragraph: positives are two distinct sentences of one paragraph, negatives
// come from two distinct paragraphs.  distance: positives are adjacent
// sentences of the global stream, negatives are sentences at least
// min_negative_distance apart.
enum class Mode { paragraph, distance };
Mode parse_mode(const std::string& name);
std::string mode_name(Mode m);

struct Provenance {
  std::string doc_a, doc_b;
  int para_a = -1, para_b = -1;  // paragraph index within the document
  int sent_a = -1, sent_b = -1;  // sentence index within the paragraph
};

struct PairInstance {
  std::vector<int> seq_a, seq_b;
  int label = 0;  // 1 = assumed same category
  Provenance prov;
};

struct PairSamplerConfig {
  Mode mode = Mode::paragraph;
  double pos_ratio = 0.5;
  int min_negative_distance = 100;  // distance mode only
  size_t num_instances = 0;
  uint64_t seed = 0;
  void validate() const;
};

// Sentence stream in original corpus order; the index in the returned vector
// is the sentence's global position for the distance predicate.
struct SentenceRef {
  size_t doc = 0, para = 0, sent = 0;
};
std::vector<SentenceRef> flatten_sentences(const corpus::Corpus& c);

PairInstance sample_positive(const corpus::Corpus& c, Mode mode, Rng& rng);
PairInstance sample_negative(const corpus::Corpus& c, Mode mode,
                             int min_distance, Rng& rng);

// Exactly cfg.num_instances pairs with round(pos_ratio * n) positives, order
// shuffled; deterministic given cfg.seed.
std::vector<PairInstance> build_training_set(const corpus::Corpus& c,
                                             const PairSamplerConfig& cfg);

struct NoiseReport {
  double positive_noise = 0.0;  // positives whose documents disagree on gold
  double negative_noise = 0.0;  // negatives whose documents share gold
  size_t num_positive = 0, num_negative = 0;
  std::string to_json() const;
};
NoiseReport label_noise_rate(const std::vector<PairInstance>& pairs,
                             const corpus::Corpus& c);

// TSV columns: label, doc_a, doc_b, space-joined ids of seq_a, ids of seq_b.
void write_pairs_tsv(const std::string& path, const std::vector<PairInstance>& pairs);
std::vector<PairInstance> read_pairs_tsv(const std::string& path);

}  // namespace pairclust::pairing
