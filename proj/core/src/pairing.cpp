#include "pairclust/pairing.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pairclust::pairing {

using corpus::Corpus;

Mode parse_mode(const std::string& name) {
  if (name == "paragraph") return Mode::paragraph;
  if (name == "distance") return Mode::distance;
  throw std::invalid_argument("unknown sampling mode: " + name);
}

std::string mode_name(Mode m) {
  return m == Mode::paragraph ? "paragraph" : "distance";
}

void PairSamplerConfig::validate() const {
  if (!(pos_ratio >= 0.0 && pos_ratio <= 1.0))
    throw std::invalid_argument("sampler: pos_ratio in [0, 1]");
  if (num_instances == 0) throw std::invalid_argument("sampler: num_instances >= 1");
  if (mode == Mode::distance && min_negative_distance < 1)
    throw std::invalid_argument("sampler: min_negative_distance >= 1");
}

std::vector<SentenceRef> flatten_sentences(const Corpus& c) {
  std::vector<SentenceRef> stream;
  for (size_t d = 0; d < c.documents.size(); ++d) {
    const auto& doc = c.documents[d];
    for (size_t p = 0; p < doc.paragraphs.size(); ++p)
      for (size_t s = 0; s < doc.paragraphs[p].size(); ++s)
        stream.push_back(SentenceRef{d, p, s});
  }
  return stream;
}

namespace {

struct ParagraphRef {
  size_t doc = 0, para = 0, num_sentences = 0;
};

// Index reused across draws so build_training_set is O(corpus + samples).
struct SamplerIndex {
  std::vector<ParagraphRef> paragraphs;     // all nonempty paragraphs
  std::vector<size_t> multi_sentence;       // indices into `paragraphs` with >= 2
  std::vector<SentenceRef> stream;          // global sentence order

  explicit SamplerIndex(const Corpus& c) {
    if (!c.encoded)
      throw std::invalid_argument("pair sampling requires an encoded corpus");
    for (size_t d = 0; d < c.documents.size(); ++d) {
      const auto& doc = c.documents[d];
      for (size_t p = 0; p < doc.paragraphs.size(); ++p) {
        const size_t n = doc.paragraphs[p].size();
        if (n == 0) continue;
        if (n >= 2) multi_sentence.push_back(paragraphs.size());
        paragraphs.push_back(ParagraphRef{d, p, n});
      }
    }
    stream = flatten_sentences(c);
  }
};

const corpus::Sentence& sentence_at(const Corpus& c, const SentenceRef& ref) {
  return c.documents[ref.doc].paragraphs[ref.para][ref.sent];
}

PairInstance make_pair(const Corpus& c, const SentenceRef& a, const SentenceRef& b,
                       int label) {
  PairInstance pi;
  pi.seq_a = sentence_at(c, a).ids;
  pi.seq_b = sentence_at(c, b).ids;
  pi.label = label;
  pi.prov.doc_a = c.documents[a.doc].id;
  pi.prov.doc_b = c.documents[b.doc].id;
  pi.prov.para_a = int(a.para);
  pi.prov.para_b = int(b.para);
  pi.prov.sent_a = int(a.sent);
  pi.prov.sent_b = int(b.sent);
  return pi;
}

PairInstance positive_from(const Corpus& c, const SamplerIndex& idx, Mode mode,
                           Rng& rng) {
  if (mode == Mode::paragraph) {
    if (idx.multi_sentence.empty())
      throw std::runtime_error("positive sampling: no paragraph has >= 2 sentences");
    const auto& p = idx.paragraphs[idx.multi_sentence[rng.uniform_index(
        idx.multi_sentence.size())]];
    const size_t i = rng.uniform_index(p.num_sentences);
    size_t j = rng.uniform_index(p.num_sentences - 1);
    if (j >= i) ++j;  // uniform over distinct pairs
    return make_pair(c, SentenceRef{p.doc, p.para, i}, SentenceRef{p.doc, p.para, j}, 1);
  }
  if (idx.stream.size() < 2)
    throw std::runtime_error("positive sampling: fewer than 2 sentences in corpus");
  const size_t k = rng.uniform_index(idx.stream.size() - 1);
  return make_pair(c, idx.stream[k], idx.stream[k + 1], 1);
}

PairInstance negative_from(const Corpus& c, const SamplerIndex& idx, Mode mode,
                           int min_distance, Rng& rng) {
  if (mode == Mode::paragraph) {
    if (idx.paragraphs.size() < 2)
      throw std::runtime_error("negative sampling: fewer than 2 paragraphs in corpus");
    const size_t pa = rng.uniform_index(idx.paragraphs.size());
    size_t pb = rng.uniform_index(idx.paragraphs.size() - 1);
    if (pb >= pa) ++pb;
    const auto& a = idx.paragraphs[pa];
    const auto& b = idx.paragraphs[pb];
    return make_pair(c, SentenceRef{a.doc, a.para, rng.uniform_index(a.num_sentences)},
                     SentenceRef{b.doc, b.para, rng.uniform_index(b.num_sentences)}, 0);
  }
  if (min_distance < 1) throw std::invalid_argument("negative sampling: min_distance >= 1");
  const size_t n = idx.stream.size();
  const size_t d = size_t(min_distance);
  if (d >= n)
    throw std::runtime_error("negative sampling: min_distance " + std::to_string(d) +
                             " >= stream length " + std::to_string(n));
  // Uniform over ordered pairs (i, i+g) with index gap g >= d: for each gap g
  // there are n-g pairs, so r indexes the triangular total sum_{g=d}^{n-1}(n-g).
  const size_t s = n - d;  // pair count at the smallest admissible gap
  const size_t total = s * (s + 1) / 2;
  const size_t r = rng.uniform_index(total);
  // Smallest k with sum_{t=0}^{k}(s-t) > r gives gap d+k.
  size_t lo = 0, hi = s - 1;
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    const size_t cum = (mid + 1) * s - mid * (mid + 1) / 2;  // pairs with gap <= d+mid
    if (cum > r)
      hi = mid;
    else
      lo = mid + 1;
  }
  const size_t k = lo;
  const size_t before = k * s - (k - 1) * k / 2;  // guarded: k=0 -> 0
  const size_t gap = d + k;
  const size_t i = r - (k == 0 ? 0 : before);
  return make_pair(c, idx.stream[i], idx.stream[i + gap], 0);
}

}  // namespace

PairInstance sample_positive(const Corpus& c, Mode mode, Rng& rng) {
  SamplerIndex idx(c);
  return positive_from(c, idx, mode, rng);
}

PairInstance sample_negative(const Corpus& c, Mode mode, int min_distance, Rng& rng) {
  SamplerIndex idx(c);
  return negative_from(c, idx, mode, min_distance, rng);
}

std::vector<PairInstance> build_training_set(const Corpus& c,
                                             const PairSamplerConfig& cfg) {
  cfg.validate();
  SamplerIndex idx(c);
  const size_t n_pos =
      size_t(std::llround(cfg.pos_ratio * double(cfg.num_instances)));
  const size_t n_neg = cfg.num_instances - n_pos;
  Rng rng(cfg.seed);
  std::vector<PairInstance> pairs;
  pairs.reserve(cfg.num_instances);
  for (size_t i = 0; i < n_pos; ++i)
    pairs.push_back(positive_from(c, idx, cfg.mode, rng));
  for (size_t i = 0; i < n_neg; ++i)
    pairs.push_back(negative_from(c, idx, cfg.mode, cfg.min_negative_distance, rng));
  rng.shuffle(pairs);
  return pairs;
}

NoiseReport label_noise_rate(const std::vector<PairInstance>& pairs, const Corpus& c) {
  std::unordered_map<std::string, int> gold;
  for (const auto& d : c.documents)
    if (d.gold_label) gold[d.id] = *d.gold_label;
  auto label_of = [&](const std::string& id) {
    auto it = gold.find(id);
    if (it == gold.end())
      throw std::runtime_error("label_noise_rate: no gold label for document " + id);
    return it->second;
  };
  NoiseReport r;
  size_t pos_bad = 0, neg_bad = 0;
  for (const auto& p : pairs) {
    const bool same = label_of(p.prov.doc_a) == label_of(p.prov.doc_b);
    if (p.label == 1) {
      ++r.num_positive;
      if (!same) ++pos_bad;
    } else {
      ++r.num_negative;
      if (same) ++neg_bad;
    }
  }
  r.positive_noise = r.num_positive ? double(pos_bad) / double(r.num_positive) : 0.0;
  r.negative_noise = r.num_negative ? double(neg_bad) / double(r.num_negative) : 0.0;
  return r;
}

std::string NoiseReport::to_json() const {
  nlohmann::json j;
  j["positive_noise"] = positive_noise;
  j["negative_noise"] = negative_noise;
  j["num_positive"] = num_positive;
  j["num_negative"] = num_negative;
  return j.dump(2);
}

void write_pairs_tsv(const std::string& path, const std::vector<PairInstance>& pairs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write pairs file: " + path);
  for (const auto& p : pairs) {
    out << p.label << '\t' << p.prov.doc_a << '\t' << p.prov.doc_b << '\t';
    for (size_t i = 0; i < p.seq_a.size(); ++i) out << (i ? " " : "") << p.seq_a[i];
    out << '\t';
    for (size_t i = 0; i < p.seq_b.size(); ++i) out << (i ? " " : "") << p.seq_b[i];
    out << '\n';
  }
}

std::vector<PairInstance> read_pairs_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pairs file: " + path);
  std::vector<PairInstance> pairs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        cols.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    auto fail = [&](const std::string& msg) -> std::runtime_error {
      return std::runtime_error(path + ": line " + std::to_string(line_no) + ": " + msg);
    };
    if (cols.size() != 5) throw fail("expected 5 TSV columns");
    PairInstance p;
    try {
      p.label = std::stoi(cols[0]);
    } catch (const std::exception&) {
      throw fail("label is not an integer");
    }
    if (p.label != 0 && p.label != 1) throw fail("label must be 0 or 1");
    p.prov.doc_a = cols[1];
    p.prov.doc_b = cols[2];
    for (int side = 0; side < 2; ++side) {
      std::istringstream ids(cols[size_t(3 + side)]);
      std::vector<int>& seq = side == 0 ? p.seq_a : p.seq_b;
      int id;
      while (ids >> id) seq.push_back(id);
      if (seq.empty()) throw fail("empty token id sequence");
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace pairclust::pairing
