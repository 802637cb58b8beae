#include "demotif/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace demotif::nn {

namespace {

double eval_loss(const std::function<TensorPtr(Graph&)>& build) {
  Graph g;
  TensorPtr loss = build(g);
  if (loss->size() != 1) {
    throw std::invalid_argument("grad_check: build must return a scalar loss");
  }
  const double v = loss->values[0];
  if (!std::isfinite(v)) {
    throw std::runtime_error("grad_check: non-finite loss");
  }
  return v;
}

}  // namespace

GradCheckReport grad_check(
    const std::function<TensorPtr(Graph&)>& build,
    const std::vector<std::pair<std::string, TensorPtr>>& checked, double eps,
    double tol) {
  if (!(eps > 0.0)) throw std::invalid_argument("grad_check: eps must be > 0");

  Graph g;
  TensorPtr loss = build(g);
  g.backward(loss);
  std::vector<std::vector<double>> analytic;
  analytic.reserve(checked.size());
  for (const auto& [name, t] : checked) {
    (void)name;
    if (t->grad.size() != t->values.size()) {
      throw std::runtime_error("grad_check: tensor has no gradient after backward");
    }
    analytic.push_back(t->grad);
  }

  GradCheckReport report;
  for (size_t ti = 0; ti < checked.size(); ++ti) {
    const auto& [name, t] = checked[ti];
    GradCheckEntry entry;
    entry.name = name;
    for (size_t j = 0; j < t->values.size(); ++j) {
      const double saved = t->values[j];
      t->values[j] = saved + eps;
      const double up = eval_loss(build);
      t->values[j] = saved - eps;
      const double down = eval_loss(build);
      t->values[j] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[ti][j];
      if (!std::isfinite(numeric) || !std::isfinite(a)) {
        throw std::runtime_error("grad_check: non-finite gradient");
      }
      const double abs_err = std::abs(a - numeric);
      const double rel_err =
          abs_err / std::max({std::abs(a), std::abs(numeric), 1e-4});
      entry.max_abs_err = std::max(entry.max_abs_err, abs_err);
      entry.max_rel_err = std::max(entry.max_rel_err, rel_err);
    }
    report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
    report.entries.push_back(std::move(entry));
  }
  report.tol = tol;
  report.passed = report.max_rel_err <= tol;
  return report;
}

}  // namespace demotif::nn
