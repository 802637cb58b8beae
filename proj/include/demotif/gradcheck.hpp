#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "demotif/graph.hpp"

namespace demotif::nn {

struct GradCheckEntry {
  std::string name;
  double max_rel_err = 0.0;
  double max_abs_err = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_err = 0.0;
  double tol = 0.0;
  bool passed = false;
};

// Central finite differences on every coordinate of the named tensors.
// build must run a fresh forward pass over those same tensors and return the
// scalar loss node; it is re-invoked after each coordinate perturbation.
// Relative error is |analytic - numeric| / max(|analytic|, |numeric|, 1e-4);
// the floor keeps finite-difference noise on near-zero gradients from
// dominating the report. Throws on non-finite values.
GradCheckReport grad_check(
    const std::function<TensorPtr(Graph&)>& build,
    const std::vector<std::pair<std::string, TensorPtr>>& checked, double eps,
    double tol);

}  // namespace demotif::nn
