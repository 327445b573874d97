#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pairclust/params.hpp"

namespace pairclust::diffcore {

struct GradCheckEntry {
  std::string name;
  double max_rel_err = 0.0;
  size_t worst_index = 0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> tensors;
  double max_rel_err = 0.0;
  bool passed(double tol) const { return max_rel_err < tol; }
};

// Central-difference check of the analytic gradients already stored in
// `params`: the caller runs its backward pass first, then this perturbs every
// trainable element by +-eps and re-evaluates `loss` (which must read the
// current values in `params`).  Relative error per element is
// |a - n| / max(|a|, |n|, 1e-8).
GradCheckReport grad_check(ParamSet& params, const std::function<double()>& loss,
                           double eps = 1e-4);

}  // namespace pairclust::diffcore
