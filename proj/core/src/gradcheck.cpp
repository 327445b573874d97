#include "pairclust/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace pairclust::diffcore {

GradCheckReport grad_check(ParamSet& params, const std::function<double()>& loss,
                           double eps) {
  GradCheckReport report;
  for (auto& p : params.items()) {
    if (!p.trainable) continue;
    GradCheckEntry entry{p.name, 0.0, 0};
    for (size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + eps;
      const double up = loss();
      p.value[i] = saved - eps;
      const double down = loss();
      p.value[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double analytic = p.grad[i];
      const double scale = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
      const double rel = std::fabs(analytic - numeric) / scale;
      if (rel > entry.max_rel_err) {
        entry.max_rel_err = rel;
        entry.worst_index = i;
      }
    }
    report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
    report.tensors.push_back(std::move(entry));
  }
  return report;
}

}  // namespace pairclust::diffcore
