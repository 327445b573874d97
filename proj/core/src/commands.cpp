#include "pairclust/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "pairclust/corpus.hpp"
#include "pairclust/encoder.hpp"
#include "pairclust/eval.hpp"
#include "pairclust/pairing.hpp"
#include "pairclust/trainer.hpp"

namespace pairclust::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing file: " + path);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_assignment_line(std::ostream& out, const std::string& doc_id,
                           const encoder::Inference& inf) {
  nlohmann::json row;
  row["doc_id"] = doc_id;
  row["cluster"] = inf.cluster;
  row["distribution"] = std::vector<double>(
      inf.distribution.data(), inf.distribution.data() + inf.distribution.size());
  out << row.dump() << '\n';
}

corpus::Corpus load_input_corpus(const CorpusSection& cs) {
  if (cs.path.empty()) throw UsageError("corpus.path is required");
  corpus::Corpus c = corpus::load_corpus(cs.path, corpus::parse_format(cs.format));
  if (!cs.labels.empty())
    corpus::apply_labels(c, corpus::load_labels_tsv(cs.labels));
  return c;
}

pairing::PairSamplerConfig sampler_config(const SamplerSection& s) {
  if (!s.seed) throw UsageError("sampler seed unresolved; pass --seed");
  if (s.num_instances == 0)
    throw UsageError("sampler.num_instances must be positive");
  pairing::PairSamplerConfig pc;
  pc.mode = pairing::parse_mode(s.mode);
  pc.pos_ratio = s.pos_ratio;
  pc.min_negative_distance = s.min_negative_distance;
  pc.num_instances = s.num_instances;
  pc.seed = *s.seed;
  pc.validate();
  return pc;
}

corpus::EmbeddingTable build_embeddings(const EmbeddingSection& e,
                                        const corpus::Vocabulary& vocab) {
  if (!e.seed) throw UsageError("embeddings seed unresolved; pass --seed");
  corpus::EmbeddingTable table;
  if (e.source == "random") {
    table = corpus::random_embeddings(vocab, e.dim, *e.seed);
  } else if (e.source == "file") {
    if (e.path.empty()) throw UsageError("embeddings.path is required with source=file");
    corpus::LoadedEmbeddings loaded = corpus::load_embeddings(e.path, vocab, e.dim, *e.seed);
    std::cout << "embeddings: matched " << loaded.matched << " of " << vocab.size()
              << " vocabulary tokens\n";
    table = std::move(loaded.table);
  } else {
    throw UsageError("embeddings.source must be \"random\" or \"file\"");
  }
  table.frozen = e.frozen;
  return table;
}

}  // namespace

int cmd_synth(const std::string& spec_path, const std::string& out_dir, uint64_t seed) {
  corpus::SyntheticSpec spec = corpus::SyntheticSpec::from_json(read_file(spec_path));
  spec.seed = seed;
  const corpus::SyntheticCorpus sc = corpus::generate_synthetic(spec);
  fs::create_directories(out_dir);
  corpus::write_lines(out_dir + "/corpus.txt", sc.corpus);
  corpus::write_labels_tsv(out_dir + "/labels.tsv", sc.corpus);
  write_file(out_dir + "/synth-spec.json", spec.to_json());
  std::cout << "wrote " << sc.corpus.documents.size() << " documents ("
            << spec.num_topics << " topics, vocabulary " << sc.vocab.size()
            << ") to " << out_dir << "\n";
  return kExitOk;
}

int cmd_pairs(const RunConfig& cfg, const std::string& config_path) {
  corpus::Corpus c = load_input_corpus(cfg.corpus);
  const corpus::Vocabulary vocab =
      corpus::build_vocab(c, cfg.corpus.min_count, cfg.corpus.max_vocab);
  corpus::encode(c, vocab, cfg.corpus.max_sentence_len);

  const pairing::PairSamplerConfig pc = sampler_config(cfg.sampler);
  const std::vector<pairing::PairInstance> pairs = pairing::build_training_set(c, pc);

  fs::create_directories(cfg.output_dir);
  pairing::write_pairs_tsv(cfg.output_dir + "/pairs.tsv", pairs);
  write_file(cfg.output_dir + "/pairs-config.json", cfg.to_json());

  size_t positives = 0;
  for (const auto& p : pairs) positives += size_t(p.label == 1);
  std::cout << "wrote " << pairs.size() << " pairs (" << positives
            << " positive) to " << cfg.output_dir << "/pairs.tsv";
  if (!config_path.empty()) std::cout << " [config " << config_path << "]";
  std::cout << "\n";

  const bool all_labeled =
      !c.documents.empty() &&
      std::all_of(c.documents.begin(), c.documents.end(),
                  [](const corpus::Document& d) { return d.gold_label.has_value(); });
  if (all_labeled) {
    const pairing::NoiseReport noise = pairing::label_noise_rate(pairs, c);
    write_file(cfg.output_dir + "/noise.json", noise.to_json());
    std::cout << "pseudo-label noise: positives " << fmt(noise.positive_noise)
              << ", negatives " << fmt(noise.negative_noise) << "\n";
  }
  return kExitOk;
}

int cmd_train(const RunConfig& cfg_in, const std::string& config_path, uint64_t seed,
              const TrainOptions& opts) {
  RunConfig cfg = cfg_in;
  cfg.resolve_seeds(seed);

  corpus::Corpus c = load_input_corpus(cfg.corpus);
  const corpus::Vocabulary vocab =
      corpus::build_vocab(c, cfg.corpus.min_count, cfg.corpus.max_vocab);
  corpus::encode(c, vocab, cfg.corpus.max_sentence_len);
  corpus::EmbeddingTable table = build_embeddings(cfg.embeddings, vocab);

  std::vector<pairing::PairInstance> pairs;
  if (!opts.pairs_path.empty()) {
    pairs = pairing::read_pairs_tsv(opts.pairs_path);
  } else {
    pairs = pairing::build_training_set(c, sampler_config(cfg.sampler));
  }

  encoder::EncoderConfig ec;
  ec.vocab_size = vocab.size();
  ec.embedding_dim = table.dim;
  ec.hidden_size = cfg.encoder.hidden_size;
  ec.num_layers = cfg.encoder.num_layers;
  ec.num_categories = cfg.encoder.num_categories;
  ec.freeze_embeddings = cfg.embeddings.frozen;
  ec.init_seed = *cfg.encoder.init_seed;
  ec.validate();

  trainer::TrainConfig tc;
  tc.learning_rate = cfg.train.learning_rate;
  tc.l2 = cfg.train.l2;
  tc.epochs = cfg.train.epochs;
  tc.batch_size = cfg.train.batch_size;
  tc.shuffle_seed = *cfg.train.shuffle_seed;
  tc.eval_every = cfg.train.eval_every;
  tc.tracked_instances = cfg.train.tracked_instances;
  tc.optimizer = trainer::parse_optimizer(cfg.train.optimizer);
  fs::create_directories(cfg.output_dir);
  tc.checkpoint_path = cfg.output_dir + "/checkpoint.json";

  trainer::TrainResult result;
  try {
    result = trainer::train(c, pairs, ec, tc, &table, &vocab, nullptr,
                            cfg.corpus.max_sentence_len);
  } catch (const trainer::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }

  result.history.write_csv(cfg.output_dir + "/history.csv");
  if (!tc.tracked_instances.empty())
    result.history.write_tracked_csv(cfg.output_dir + "/track-");
  write_file(cfg.output_dir + "/train-config.json", cfg.to_json());

  {
    std::ofstream assign(cfg.output_dir + "/assignments.jsonl");
    if (!assign) throw std::runtime_error("cannot write assignments.jsonl");
    for (const auto& doc : c.documents)
      write_assignment_line(assign, doc.id,
                            encoder::infer_document(ec, result.params, doc));
  }

  std::cout << "trained " << result.steps << " steps on " << pairs.size()
            << " pairs; checkpoint " << tc.checkpoint_path;
  if (!config_path.empty()) std::cout << " [config " << config_path << "]";
  std::cout << "\n";
  if (!result.history.points.empty())
    std::cout << "final mean pair cost " << fmt(result.history.points.back().mean_cost)
              << "\n";

  const bool any_labeled =
      std::any_of(c.documents.begin(), c.documents.end(),
                  [](const corpus::Document& d) { return d.gold_label.has_value(); });
  if (any_labeled) {
    const eval::ClusteringReport rep = trainer::evaluate_checkpoint(ec, result.params, c);
    write_file(cfg.output_dir + "/report.json", rep.to_json());
    write_file(cfg.output_dir + "/report.txt", rep.to_text());
    std::cout << rep.to_text();
  }
  return kExitOk;
}

int cmd_infer(const std::string& checkpoint_path, const std::string& corpus_path,
              const std::string& format, const std::string& out_path) {
  const trainer::Checkpoint ckpt = trainer::load_checkpoint(checkpoint_path);
  if (ckpt.vocab.empty())
    throw UsageError("checkpoint has no vocabulary; cannot encode raw text");
  if (ckpt.vocab[0] != corpus::Vocabulary::kUnkToken)
    throw UsageError("checkpoint vocabulary is malformed (expected leading <unk>)");
  corpus::Vocabulary vocab;
  for (size_t i = 1; i < ckpt.vocab.size(); ++i) vocab.add(ckpt.vocab[i]);
  if (vocab.size() != ckpt.config.vocab_size)
    throw UsageError("checkpoint vocabulary does not match its encoder dimensions");

  corpus::Corpus c = corpus::load_corpus(corpus_path, corpus::parse_format(format));
  corpus::encode(c, vocab, ckpt.max_sentence_len);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot write output: " + out_path);
    out = &file;
  }
  for (const auto& doc : c.documents)
    write_assignment_line(*out, doc.id,
                          encoder::infer_document(ckpt.config, ckpt.params, doc));
  return kExitOk;
}

int cmd_eval(const std::string& assignments_path, const std::string& labels_path,
             const std::string& out_prefix) {
  const auto labels = corpus::load_labels_tsv(labels_path);
  std::ifstream in(assignments_path);
  if (!in) throw UsageError("cannot open assignments: " + assignments_path);
  std::vector<int> gold, predicted;
  std::vector<std::vector<double>> distributions;
  bool all_have_distribution = true;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const std::string where =
        assignments_path + ": line " + std::to_string(line_no);
    std::string id;
    int cluster = 0;
    std::vector<double> dist;
    if (line[first] == '{') {
      nlohmann::json row;
      try {
        row = nlohmann::json::parse(line);
        id = row.at("doc_id").get<std::string>();
        cluster = row.at("cluster").get<int>();
        if (row.contains("distribution"))
          dist = row["distribution"].get<std::vector<double>>();
      } catch (const nlohmann::json::exception& e) {
        throw UsageError(where + ": " + e.what());
      }
    } else {
      std::istringstream ls(line);
      std::string cluster_field;
      if (!std::getline(ls, id, '\t') || !std::getline(ls, cluster_field, '\t'))
        throw UsageError(where + ": expected <doc_id>\\t<cluster>");
      try {
        cluster = std::stoi(cluster_field);
      } catch (const std::exception&) {
        throw UsageError(where + ": cluster id is not an integer");
      }
    }
    const auto it = labels.find(id);
    if (it == labels.end())
      throw UsageError("no gold label for document " + id);
    gold.push_back(it->second);
    predicted.push_back(cluster);
    if (dist.empty())
      all_have_distribution = false;
    else
      distributions.push_back(std::move(dist));
  }
  if (gold.empty()) throw UsageError("assignments file is empty: " + assignments_path);

  if (!all_have_distribution) distributions.clear();
  const eval::ClusteringReport rep = eval::report(gold, predicted, distributions);
  write_file(out_prefix + ".json", rep.to_json());
  write_file(out_prefix + ".txt", rep.to_text());
  std::cout << rep.to_text();
  return kExitOk;
}

int cmd_gradcheck(const GradCheckOptions& opts) {
  encoder::ModelGradCheckConfig mc;
  mc.cases = opts.cases;
  mc.max_len = opts.max_len;
  mc.eps = opts.eps;
  mc.seed = opts.seed;
  const diffcore::GradCheckReport report = encoder::model_grad_check(mc);

  std::vector<diffcore::GradCheckEntry> worst = report.tensors;
  std::sort(worst.begin(), worst.end(),
            [](const auto& a, const auto& b) { return a.max_rel_err > b.max_rel_err; });
  for (size_t i = 0; i < worst.size() && i < 5; ++i)
    std::cout << "  " << worst[i].name << ": max rel err " << fmt(worst[i].max_rel_err)
              << "\n";
  std::cout << "gradient check: max relative error " << fmt(report.max_rel_err)
            << " over " << opts.cases << " cases (tolerance " << fmt(opts.tol) << ")\n";
  const bool ok = report.passed(opts.tol);
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace pairclust::cli
