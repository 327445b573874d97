#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace pairclust::corpus {

struct Sentence {
  std::vector<std::string> tokens;  // raw tokens from the loader
  std::vector<int> ids;             // filled by encode()
};
using Paragraph = std::vector<Sentence>;

struct Document {
  std::string id;
  std::optional<int> gold_label;
  std::vector<Paragraph> paragraphs;
  size_t num_sentences() const;
};

struct Corpus {
  std::vector<Document> documents;
  bool encoded = false;
  size_t num_sentences() const;
  size_t num_paragraphs() const;
  const Document* find_document(const std::string& id) const;
};

class Vocabulary {
 public:
  static constexpr int kUnkId = 0;
  static constexpr const char* kUnkToken = "<unk>";

  Vocabulary();
  int add(const std::string& token);           // returns existing id if present
  int lookup(const std::string& token) const;  // kUnkId when absent
  bool contains(const std::string& token) const;
  const std::string& token(int id) const;
  size_t size() const { return id_to_token_.size(); }
  const std::vector<std::string>& tokens() const { return id_to_token_; }

 private:
  std::unordered_map<std::string, int> token_to_id_;
  std::vector<std::string> id_to_token_;
};

struct EmbeddingTable {
  size_t vocab_size = 0;
  size_t dim = 0;
  bool frozen = true;
  std::vector<double> data;  // row-major vocab_size x dim
  double* row(size_t i) { return data.data() + i * dim; }
  const double* row(size_t i) const { return data.data() + i * dim; }
};

// Planted-topic corpus: K disjoint lexicons; each token comes from the
// document's own lexicon with probability topic_purity and otherwise uniformly
// from the other lexicons, so the observed in-topic token fraction is exactly
// topic_purity and purity 1/K makes the token distribution label-independent.
struct SyntheticSpec {
  int num_topics = 2;
  int words_per_topic = 20;
  double topic_purity = 0.8;
  int docs_per_topic = 10;
  int paragraphs_per_doc = 2;
  int sentences_per_paragraph = 3;
  int tokens_per_sentence = 10;
  uint64_t seed = 0;
  void validate() const;
  std::string to_json() const;
  static SyntheticSpec from_json(const std::string& text);
};

enum class CorpusFormat { lines, jsonl };
CorpusFormat parse_format(const std::string& name);

// Lowercases, splits punctuation characters into standalone tokens, then
// splits on whitespace.  Multi-byte UTF-8 sequences pass through untouched.
std::vector<std::string> tokenize(const std::string& text);

Corpus load_corpus(const std::string& path, CorpusFormat format);

// Frequency-descending, ties lexicographic; tokens below min_count map to UNK.
// max_size caps the total entry count including UNK; 0 means unbounded.
Vocabulary build_vocab(const Corpus& c, size_t min_count = 1, size_t max_size = 0);

void encode(Corpus& c, const Vocabulary& vocab, size_t max_sentence_len = 64);

struct LoadedEmbeddings {
  EmbeddingTable table;
  size_t matched = 0;  // vocab tokens found in the file (UNK excluded)
};
LoadedEmbeddings load_embeddings(const std::string& path, const Vocabulary& vocab,
                                 size_t dim, uint64_t seed);
EmbeddingTable random_embeddings(const Vocabulary& vocab, size_t dim, uint64_t seed);
void save_embeddings(const std::string& path, const EmbeddingTable& table,
                     const Vocabulary& vocab);

struct SyntheticCorpus {
  Corpus corpus;
  Vocabulary vocab;
};
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

void write_lines(const std::string& path, const Corpus& c);
void write_labels_tsv(const std::string& path, const Corpus& c);
std::unordered_map<std::string, int> load_labels_tsv(const std::string& path);
void apply_labels(Corpus& c, const std::unordered_map<std::string, int>& labels);

}  // namespace pairclust::corpus
