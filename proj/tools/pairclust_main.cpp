// Command-line front end: every subcommand is a thin flag layer over the
// library entry points in pairclust/commands.hpp.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pairclust/commands.hpp"
#include "pairclust/config.hpp"

namespace {

using pairclust::cli::RunConfig;

struct ConfigFlags {
  std::string config_path;
  std::optional<std::string> corpus_path, corpus_format, labels_path;
  std::optional<size_t> min_count, max_vocab, max_sentence_len;
  std::optional<std::string> emb_source, emb_path;
  std::optional<size_t> emb_dim;
  std::optional<bool> emb_frozen;
  std::optional<std::string> mode;
  std::optional<double> pos_ratio;
  std::optional<int> min_distance;
  std::optional<size_t> num_instances;
  std::optional<size_t> hidden, layers, categories;
  std::optional<double> lr, l2;
  std::optional<size_t> epochs, batch, eval_every;
  std::optional<std::string> optimizer;
  std::optional<std::string> out_dir;
};

void add_corpus_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--config", f.config_path, "run configuration (JSON)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--corpus", f.corpus_path, "input corpus path (overrides config)");
  cmd->add_option("--format", f.corpus_format, "corpus format: lines | jsonl");
  cmd->add_option("--labels", f.labels_path, "gold labels TSV");
  cmd->add_option("--min-count", f.min_count, "vocabulary frequency cutoff");
  cmd->add_option("--max-vocab", f.max_vocab, "vocabulary size cap (0 = unbounded)");
  cmd->add_option("--max-sentence-len", f.max_sentence_len, "token truncation length");
  cmd->add_option("--out", f.out_dir, "output directory");
}

void add_sampler_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--mode", f.mode, "pair sampling mode: paragraph | distance");
  cmd->add_option("--pos-ratio", f.pos_ratio, "fraction of positive pairs");
  cmd->add_option("--min-distance", f.min_distance,
                  "minimum sentence gap for distance-mode negatives");
  cmd->add_option("--instances", f.num_instances, "number of training pairs");
}

void add_train_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--emb-source", f.emb_source, "embedding source: random | file");
  cmd->add_option("--emb-path", f.emb_path, "embedding text file (source=file)");
  cmd->add_option("--emb-dim", f.emb_dim, "embedding dimension");
  cmd->add_option("--emb-frozen", f.emb_frozen, "freeze the embedding table");
  cmd->add_option("--hidden", f.hidden, "LSTM hidden units per direction");
  cmd->add_option("--layers", f.layers, "stacked BiLSTM layers");
  cmd->add_option("--categories", f.categories, "number of output categories");
  cmd->add_option("--lr", f.lr, "learning rate");
  cmd->add_option("--l2", f.l2, "L2 regularization strength");
  cmd->add_option("--epochs", f.epochs, "training epochs");
  cmd->add_option("--batch", f.batch, "batch size");
  cmd->add_option("--eval-every", f.eval_every, "optimizer steps between history rows");
  cmd->add_option("--optimizer", f.optimizer, "sgd | adam");
}

RunConfig materialize(const ConfigFlags& f) {
  RunConfig cfg = f.config_path.empty() ? RunConfig{} : RunConfig::from_file(f.config_path);
  if (f.corpus_path) cfg.corpus.path = *f.corpus_path;
  if (f.corpus_format) cfg.corpus.format = *f.corpus_format;
  if (f.labels_path) cfg.corpus.labels = *f.labels_path;
  if (f.min_count) cfg.corpus.min_count = *f.min_count;
  if (f.max_vocab) cfg.corpus.max_vocab = *f.max_vocab;
  if (f.max_sentence_len) cfg.corpus.max_sentence_len = *f.max_sentence_len;
  if (f.emb_source) cfg.embeddings.source = *f.emb_source;
  if (f.emb_path) cfg.embeddings.path = *f.emb_path;
  if (f.emb_dim) cfg.embeddings.dim = *f.emb_dim;
  if (f.emb_frozen) cfg.embeddings.frozen = *f.emb_frozen;
  if (f.mode) cfg.sampler.mode = *f.mode;
  if (f.pos_ratio) cfg.sampler.pos_ratio = *f.pos_ratio;
  if (f.min_distance) cfg.sampler.min_negative_distance = *f.min_distance;
  if (f.num_instances) cfg.sampler.num_instances = *f.num_instances;
  if (f.hidden) cfg.encoder.hidden_size = *f.hidden;
  if (f.layers) cfg.encoder.num_layers = *f.layers;
  if (f.categories) cfg.encoder.num_categories = *f.categories;
  if (f.lr) cfg.train.learning_rate = *f.lr;
  if (f.l2) cfg.train.l2 = *f.l2;
  if (f.epochs) cfg.train.epochs = *f.epochs;
  if (f.batch) cfg.train.batch_size = *f.batch;
  if (f.eval_every) cfg.train.eval_every = *f.eval_every;
  if (f.optimizer) cfg.train.optimizer = *f.optimizer;
  if (f.out_dir) cfg.output_dir = *f.out_dir;
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"pairwise-supervised text clustering"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a planted-topic corpus");
  std::string synth_spec, synth_out = ".";
  uint64_t synth_seed = 0;
  synth->add_option("--spec", synth_spec, "corpus specification (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--out", synth_out, "output directory");
  synth->add_option("--seed", synth_seed, "generation seed")->required();

  // pairs
  auto* pairs = app.add_subcommand("pairs", "sample pseudo-labeled sentence pairs");
  ConfigFlags pf;
  uint64_t pairs_seed = 0;
  add_corpus_flags(pairs, pf);
  add_sampler_flags(pairs, pf);
  pairs->add_option("--seed", pairs_seed, "master seed for unset stage seeds")
      ->required();

  // train
  auto* train = app.add_subcommand("train", "train the siamese sentence encoder");
  ConfigFlags tf;
  uint64_t train_seed = 0;
  std::string train_pairs_path;
  add_corpus_flags(train, tf);
  add_sampler_flags(train, tf);
  add_train_flags(train, tf);
  train->add_option("--pairs", train_pairs_path, "replay a pairs TSV instead of sampling")
      ->check(CLI::ExistingFile);
  train->add_option("--seed", train_seed, "master seed for unset stage seeds")
      ->required();

  // infer
  auto* infer = app.add_subcommand("infer", "assign documents to categories");
  std::string infer_ckpt, infer_corpus, infer_format = "lines", infer_out = "-";
  infer->add_option("--checkpoint", infer_ckpt, "trained checkpoint (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  infer->add_option("--corpus", infer_corpus, "corpus to cluster")
      ->required()
      ->check(CLI::ExistingFile);
  infer->add_option("--format", infer_format, "corpus format: lines | jsonl");
  infer->add_option("--out", infer_out, "output TSV path (- for stdout)");

  // eval
  auto* ev = app.add_subcommand("eval", "score assignments against gold labels");
  std::string eval_assign, eval_labels, eval_out = "report";
  ev->add_option("--assignments", eval_assign, "assignments TSV (doc_id, cluster)")
      ->required()
      ->check(CLI::ExistingFile);
  ev->add_option("--labels", eval_labels, "gold labels TSV")
      ->required()
      ->check(CLI::ExistingFile);
  ev->add_option("--out", eval_out, "output prefix for report.{json,txt}");

  // gradcheck
  auto* gc = app.add_subcommand("gradcheck", "finite-difference gradient audit");
  pairclust::cli::GradCheckOptions gopt;
  gc->add_option("--cases", gopt.cases, "number of random model/input cases");
  gc->add_option("--max-len", gopt.max_len, "maximum sentence length");
  gc->add_option("--eps", gopt.eps, "finite-difference step");
  gc->add_option("--tol", gopt.tol, "maximum allowed relative error");
  gc->add_option("--seed", gopt.seed, "case generation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pairclust::cli::kExitUsage;
  }

  try {
    if (synth->parsed())
      return pairclust::cli::cmd_synth(synth_spec, synth_out, synth_seed);
    if (pairs->parsed()) {
      RunConfig cfg = materialize(pf);
      cfg.resolve_seeds(pairs_seed);
      return pairclust::cli::cmd_pairs(cfg, pf.config_path);
    }
    if (train->parsed()) {
      const RunConfig cfg = materialize(tf);
      pairclust::cli::TrainOptions opts;
      opts.pairs_path = train_pairs_path;
      return pairclust::cli::cmd_train(cfg, tf.config_path, train_seed, opts);
    }
    if (infer->parsed())
      return pairclust::cli::cmd_infer(infer_ckpt, infer_corpus, infer_format, infer_out);
    if (ev->parsed()) return pairclust::cli::cmd_eval(eval_assign, eval_labels, eval_out);
    if (gc->parsed()) return pairclust::cli::cmd_gradcheck(gopt);
  } catch (const pairclust::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pairclust::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pairclust::cli::kExitUsage;
  }
  return pairclust::cli::kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
