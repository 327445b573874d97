#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "pairclust/tensor.hpp"

namespace pairclust::diffcore {

struct ParamTensor {
  std::string name;
  Tensor value;
  Tensor grad;  // same shape as value, zero-initialized
  bool trainable = true;
};

// Named parameter collection with stable insertion order.  Order matters: it
// fixes initialization draw order, update order, and serialization layout.
class ParamSet {
 public:
  Tensor& add(const std::string& name, Tensor init, bool trainable = true);
  bool has(const std::string& name) const;
  ParamTensor& at(const std::string& name);
  const ParamTensor& at(const std::string& name) const;
  std::vector<ParamTensor>& items() { return items_; }
  const std::vector<ParamTensor>& items() const { return items_; }
  size_t num_values() const;

  void zero_grads();
  void scale_grads(double s);
  bool grads_all_finite() const;

  std::string to_json() const;  // round-trips doubles exactly
  static ParamSet from_json(const std::string& text);
  bool same_values(const ParamSet& o) const;

 private:
  std::vector<ParamTensor> items_;
  std::unordered_map<std::string, size_t> index_;
};

// theta <- theta - lr * (grad + l2 * theta), then gradients are zeroed.
// Non-trainable tensors are left untouched.
void sgd_step(ParamSet& params, double lr, double l2);

struct OptimizerConfig {
  enum class Kind { sgd, adam };
  Kind kind = Kind::sgd;
  double lr = 1e-3;
  double l2 = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// SGD delegates to sgd_step; adam keeps bias-corrected first/second moments of
// the raw gradient and applies the l2 decay decoupled from that rescaling
// (theta -= lr * (adam_direction + l2 * theta)), so a small cost gradient can
// never amplify the decay term into a full-sized step.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig cfg) : cfg_(cfg) {}

  void step(ParamSet& params);
  const OptimizerConfig& config() const { return cfg_; }
  uint64_t steps_taken() const { return t_; }

  std::string state_to_json() const;
  void state_from_json(const std::string& text, const ParamSet& params);

 private:
  void ensure_state(const ParamSet& params);

  OptimizerConfig cfg_;
  uint64_t t_ = 0;
  std::vector<std::string> state_names_;
  std::vector<Tensor> m_, v_;
};

}  // namespace pairclust::diffcore
