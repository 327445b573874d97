#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "pairclust/config.hpp"

namespace pairclust::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // bad flags, missing/malformed input
inline constexpr int kExitNumerical = 2;  // divergence or failed gradient check

// Input/usage problems detected past flag parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Commands compose through files only; each writes into its output directory
// and copies the config it ran with for provenance.

int cmd_synth(const std::string& spec_path, const std::string& out_dir, uint64_t seed);

int cmd_pairs(const RunConfig& cfg, const std::string& config_path);

struct TrainOptions {
  std::string pairs_path;  // optional TSV replay; empty = sample from config
};
int cmd_train(const RunConfig& cfg, const std::string& config_path, uint64_t seed,
              const TrainOptions& opts = {});

int cmd_infer(const std::string& checkpoint_path, const std::string& corpus_path,
              const std::string& format, const std::string& out_path);

int cmd_eval(const std::string& assignments_path, const std::string& labels_path,
             const std::string& out_prefix);

struct GradCheckOptions {
  size_t cases = 100;
  size_t max_len = 5;
  double eps = 1e-4;
  double tol = 1e-4;
  uint64_t seed = 0;
};
int cmd_gradcheck(const GradCheckOptions& opts);

}  // namespace pairclust::cli
