#include "pairclust/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pairclust/rng.hpp"

namespace pairclust::corpus {

using nlohmann::json;

size_t Document::num_sentences() const {
  size_t n = 0;
  for (const auto& p : paragraphs) n += p.size();
  return n;
}

size_t Corpus::num_sentences() const {
  size_t n = 0;
  for (const auto& d : documents) n += d.num_sentences();
  return n;
}

size_t Corpus::num_paragraphs() const {
  size_t n = 0;
  for (const auto& d : documents) n += d.paragraphs.size();
  return n;
}

const Document* Corpus::find_document(const std::string& id) const {
  for (const auto& d : documents)
    if (d.id == id) return &d;
  return nullptr;
}

Vocabulary::Vocabulary() {
  id_to_token_.push_back(kUnkToken);
  token_to_id_[kUnkToken] = kUnkId;
}

int Vocabulary::add(const std::string& token) {
  auto it = token_to_id_.find(token);
  if (it != token_to_id_.end()) return it->second;
  const int id = static_cast<int>(id_to_token_.size());
  id_to_token_.push_back(token);
  token_to_id_[token] = id;
  return id;
}

int Vocabulary::lookup(const std::string& token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(const std::string& token) const {
  return token_to_id_.count(token) > 0;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || size_t(id) >= id_to_token_.size())
    throw std::invalid_argument("Vocabulary: id out of range: " + std::to_string(id));
  return id_to_token_[size_t(id)];
}

void SyntheticSpec::validate() const {
  if (num_topics < 1) throw std::invalid_argument("synthetic: num_topics >= 1");
  if (words_per_topic < 1) throw std::invalid_argument("synthetic: words_per_topic >= 1");
  if (!(topic_purity > 0.0 && topic_purity <= 1.0))
    throw std::invalid_argument("synthetic: topic_purity in (0, 1]");
  if (docs_per_topic < 1 || paragraphs_per_doc < 1 || sentences_per_paragraph < 1 ||
      tokens_per_sentence < 1)
    throw std::invalid_argument("synthetic: all counts must be >= 1");
}

std::string SyntheticSpec::to_json() const {
  json j;
  j["num_topics"] = num_topics;
  j["words_per_topic"] = words_per_topic;
  j["topic_purity"] = topic_purity;
  j["docs_per_topic"] = docs_per_topic;
  j["paragraphs_per_doc"] = paragraphs_per_doc;
  j["sentences_per_paragraph"] = sentences_per_paragraph;
  j["tokens_per_sentence"] = tokens_per_sentence;
  j["seed"] = seed;
  return j.dump(2);
}

SyntheticSpec SyntheticSpec::from_json(const std::string& text) {
  json j = json::parse(text);
  SyntheticSpec s;
  // Misspelled keys must not silently fall back to defaults.
  static constexpr const char* kKeys[] = {
      "num_topics",        "words_per_topic",
      "topic_purity",      "docs_per_topic",
      "paragraphs_per_doc", "sentences_per_paragraph",
      "tokens_per_sentence", "seed"};
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : kKeys)
      if (item.key() == k) { known = true; break; }
    if (!known)
      throw std::runtime_error("synthetic spec: unknown key " + item.key());
  }
  s.num_topics = j.value("num_topics", s.num_topics);
  s.words_per_topic = j.value("words_per_topic", s.words_per_topic);
  s.topic_purity = j.value("topic_purity", s.topic_purity);
  s.docs_per_topic = j.value("docs_per_topic", s.docs_per_topic);
  s.paragraphs_per_doc = j.value("paragraphs_per_doc", s.paragraphs_per_doc);
  s.sentences_per_paragraph = j.value("sentences_per_paragraph", s.sentences_per_paragraph);
  s.tokens_per_sentence = j.value("tokens_per_sentence", s.tokens_per_sentence);
  s.seed = j.value("seed", s.seed);
  s.validate();
  return s;
}

CorpusFormat parse_format(const std::string& name) {
  if (name == "lines") return CorpusFormat::lines;
  if (name == "jsonl") return CorpusFormat::jsonl;
  throw std::invalid_argument("unknown corpus format: " + name);
}

std::vector<std::string> tokenize(const std::string& text) {
  std::string spaced;
  spaced.reserve(text.size() + 8);
  for (const char ch : text) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::ispunct(c)) {
      spaced.push_back(' ');
      spaced.push_back(ch);
      spaced.push_back(' ');
    } else if (c < 0x80) {
      spaced.push_back(static_cast<char>(std::tolower(c)));
    } else {
      spaced.push_back(ch);  // multi-byte UTF-8 passes through
    }
  }
  std::vector<std::string> tokens;
  std::istringstream in(spaced);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

namespace {

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

void finish_paragraph(Document& doc, Paragraph& para) {
  if (!para.empty()) doc.paragraphs.push_back(std::move(para));
  para.clear();
}

void finish_document(Corpus& c, Document& doc, Paragraph& para, size_t& next_id) {
  finish_paragraph(doc, para);
  if (!doc.paragraphs.empty()) {
    doc.id = "d" + std::to_string(next_id++);
    c.documents.push_back(std::move(doc));
  }
  doc = Document{};
}

// One sentence per line; one blank line separates paragraphs, two consecutive
// blank lines separate documents.  Document ids are assigned sequentially.
Corpus load_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  Corpus c;
  Document doc;
  Paragraph para;
  size_t next_id = 0;
  size_t blanks = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      ++blanks;
      continue;
    }
    if (blanks >= 2) {
      finish_document(c, doc, para, next_id);
    } else if (blanks == 1) {
      finish_paragraph(doc, para);
    }
    blanks = 0;
    Sentence s;
    s.tokens = tokenize(line);
    if (!s.tokens.empty()) para.push_back(std::move(s));
  }
  finish_document(c, doc, para, next_id);
  if (c.documents.empty()) throw std::runtime_error("empty corpus: " + path);
  return c;
}

// One JSON object per line: {"id": str, "label": int?, "paragraphs": [[str,...],...]}.
Corpus load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  Corpus c;
  std::string line;
  size_t line_no = 0;
  std::unordered_map<std::string, bool> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": " +
                               e.what());
    }
    auto fail = [&](const std::string& msg) -> std::runtime_error {
      return std::runtime_error(path + ": line " + std::to_string(line_no) + ": " + msg);
    };
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string())
      throw fail("expected an object with a string \"id\"");
    if (!j.contains("paragraphs") || !j["paragraphs"].is_array())
      throw fail("expected a \"paragraphs\" array");
    Document doc;
    doc.id = j["id"].get<std::string>();
    if (seen.count(doc.id)) throw fail("duplicate document id " + doc.id);
    seen[doc.id] = true;
    if (j.contains("label")) {
      if (!j["label"].is_number_integer()) throw fail("\"label\" must be an integer");
      doc.gold_label = j["label"].get<int>();
    }
    for (const auto& para_json : j["paragraphs"]) {
      if (!para_json.is_array()) throw fail("paragraph must be an array of strings");
      Paragraph para;
      for (const auto& sent_json : para_json) {
        if (!sent_json.is_string()) throw fail("sentence must be a string");
        Sentence s;
        s.tokens = tokenize(sent_json.get<std::string>());
        if (!s.tokens.empty()) para.push_back(std::move(s));
      }
      if (!para.empty()) doc.paragraphs.push_back(std::move(para));
    }
    if (!doc.paragraphs.empty()) c.documents.push_back(std::move(doc));
  }
  if (c.documents.empty()) throw std::runtime_error("empty corpus: " + path);
  return c;
}

}  // namespace

Corpus load_corpus(const std::string& path, CorpusFormat format) {
  return format == CorpusFormat::lines ? load_lines(path) : load_jsonl(path);
}

Vocabulary build_vocab(const Corpus& c, size_t min_count, size_t max_size) {
  if (c.documents.empty()) throw std::invalid_argument("build_vocab: empty corpus");
  if (min_count < 1) throw std::invalid_argument("build_vocab: min_count >= 1");
  std::unordered_map<std::string, size_t> freq;
  for (const auto& d : c.documents)
    for (const auto& p : d.paragraphs)
      for (const auto& s : p)
        for (const auto& tok : s.tokens) ++freq[tok];
  std::vector<std::pair<std::string, size_t>> items;
  items.reserve(freq.size());
  for (auto& kv : freq)
    if (kv.second >= min_count) items.emplace_back(kv.first, kv.second);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary vocab;  // UNK occupies one slot of the cap
  const size_t keep = max_size == 0 ? items.size() : std::min(items.size(), max_size - 1);
  for (size_t i = 0; i < keep; ++i) vocab.add(items[i].first);
  return vocab;
}

void encode(Corpus& c, const Vocabulary& vocab, size_t max_sentence_len) {
  if (max_sentence_len < 1) throw std::invalid_argument("encode: max_sentence_len >= 1");
  for (auto& d : c.documents) {
    for (auto& p : d.paragraphs) {
      for (auto& s : p) {
        s.ids.clear();
        const size_t n = std::min(s.tokens.size(), max_sentence_len);
        s.ids.reserve(n);
        for (size_t i = 0; i < n; ++i) s.ids.push_back(vocab.lookup(s.tokens[i]));
      }
    }
  }
  c.encoded = true;
}

namespace {

// Rows absent from the file (UNK always counts as absent) are filled in
// ascending row order from one seeded stream, so loading a just-saved table
// reproduces it bitwise: UNK is row 0 and gets the stream head both times.
void fill_missing_rows(EmbeddingTable& table, const std::vector<bool>& found,
                       uint64_t seed) {
  Rng rng(seed);
  for (size_t r = 0; r < table.vocab_size; ++r) {
    if (found[r]) continue;
    double* row = table.row(r);
    for (size_t d = 0; d < table.dim; ++d) row[d] = rng.uniform_real(-0.1, 0.1);
  }
}

}  // namespace

LoadedEmbeddings load_embeddings(const std::string& path, const Vocabulary& vocab,
                                 size_t dim, uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("load_embeddings: dim >= 1");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embeddings file: " + path);
  LoadedEmbeddings result;
  result.table.vocab_size = vocab.size();
  result.table.dim = dim;
  result.table.data.assign(vocab.size() * dim, 0.0);
  std::vector<bool> found(vocab.size(), false);
  std::string line;
  size_t line_no = 0;
  std::vector<double> row(dim);
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    size_t got = 0;
    double v;
    while (got < dim && ls >> v) row[got++] = v;
    std::string extra;
    if (got < dim || (ls >> extra)) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected token plus " + std::to_string(dim) +
                               " floats");
    }
    const int id = vocab.lookup(token);
    if (id == Vocabulary::kUnkId) continue;  // unknown token, or the UNK token itself
    if (found[size_t(id)]) continue;         // first occurrence wins
    std::copy(row.begin(), row.end(), result.table.row(size_t(id)));
    found[size_t(id)] = true;
    ++result.matched;
  }
  fill_missing_rows(result.table, found, seed);
  return result;
}

EmbeddingTable random_embeddings(const Vocabulary& vocab, size_t dim, uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_embeddings: dim >= 1");
  EmbeddingTable table;
  table.vocab_size = vocab.size();
  table.dim = dim;
  table.data.resize(vocab.size() * dim);
  Rng rng(seed);
  for (auto& x : table.data) x = rng.uniform_real(-0.1, 0.1);
  return table;
}

void save_embeddings(const std::string& path, const EmbeddingTable& table,
                     const Vocabulary& vocab) {
  if (table.vocab_size != vocab.size())
    throw std::invalid_argument("save_embeddings: table/vocab size mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write embeddings file: " + path);
  char buf[64];
  for (size_t r = 0; r < table.vocab_size; ++r) {
    out << vocab.token(int(r));
    const double* row = table.row(r);
    for (size_t d = 0; d < table.dim; ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[d]);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  SyntheticCorpus out;
  const int K = spec.num_topics, W = spec.words_per_topic;
  std::vector<std::vector<std::string>> lexicons(static_cast<size_t>(K));
  for (int t = 0; t < K; ++t) {
    for (int w = 0; w < W; ++w)
      lexicons[size_t(t)].push_back("t" + std::to_string(t) + "w" + std::to_string(w));
  }
  for (const auto& lex : lexicons)
    for (const auto& word : lex) out.vocab.add(word);

  Rng rng(spec.seed);
  size_t next_id = 0;
  for (int t = 0; t < K; ++t) {
    for (int d = 0; d < spec.docs_per_topic; ++d) {
      Document doc;
      doc.id = "d" + std::to_string(next_id++);
      doc.gold_label = t;
      for (int p = 0; p < spec.paragraphs_per_doc; ++p) {
        Paragraph para;
        for (int s = 0; s < spec.sentences_per_paragraph; ++s) {
          Sentence sent;
          for (int w = 0; w < spec.tokens_per_sentence; ++w) {
            const bool own = K == 1 || rng.uniform_real(0.0, 1.0) < spec.topic_purity;
            std::string word;
            if (own) {
              word = lexicons[size_t(t)][rng.uniform_index(size_t(W))];
            } else {
              // uniform over the other topics' lexicons
              const size_t pick = rng.uniform_index(size_t(K - 1) * size_t(W));
              size_t other = pick / size_t(W);
              if (other >= size_t(t)) ++other;
              word = lexicons[other][pick % size_t(W)];
            }
            sent.ids.push_back(out.vocab.lookup(word));
            sent.tokens.push_back(std::move(word));
          }
          para.push_back(std::move(sent));
        }
        doc.paragraphs.push_back(std::move(para));
      }
      out.corpus.documents.push_back(std::move(doc));
    }
  }
  out.corpus.encoded = true;
  return out;
}

void write_lines(const std::string& path, const Corpus& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  bool first_doc = true;
  for (const auto& d : c.documents) {
    if (!first_doc) out << "\n\n";  // two blank lines between documents
    first_doc = false;
    bool first_para = true;
    for (const auto& p : d.paragraphs) {
      if (!first_para) out << "\n";  // one blank line between paragraphs
      first_para = false;
      for (const auto& s : p) {
        for (size_t i = 0; i < s.tokens.size(); ++i) {
          if (i) out << ' ';
          out << s.tokens[i];
        }
        out << '\n';
      }
    }
  }
}

void write_labels_tsv(const std::string& path, const Corpus& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write labels file: " + path);
  for (const auto& d : c.documents) {
    if (!d.gold_label) continue;
    out << d.id << '\t' << *d.gold_label << '\n';
  }
}

std::unordered_map<std::string, int> load_labels_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open labels file: " + path);
  std::unordered_map<std::string, int> labels;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected doc_id<TAB>label");
    const std::string id = line.substr(0, tab);
    try {
      labels[id] = std::stoi(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": label is not an integer");
    }
  }
  return labels;
}

void apply_labels(Corpus& c, const std::unordered_map<std::string, int>& labels) {
  for (auto& d : c.documents) {
    auto it = labels.find(d.id);
    if (it != labels.end()) d.gold_label = it->second;
  }
}

}  // namespace pairclust::corpus
