#include "demotif/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace demotif::nn {

AdamState AdamState::init_like(const std::vector<TensorPtr>& params) {
  AdamState s;
  s.m.reserve(params.size());
  s.v.reserve(params.size());
  for (const auto& p : params) {
    s.m.emplace_back(p->values.size(), 0.0);
    s.v.emplace_back(p->values.size(), 0.0);
  }
  return s;
}

void adam_step(const std::vector<TensorPtr>& params, AdamState& state,
               const AdamConfig& cfg) {
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw std::invalid_argument("adam_step: state shape mismatch");
  }
  for (size_t i = 0; i < params.size(); ++i) {
    if (state.m[i].size() != params[i]->values.size()) {
      throw std::invalid_argument("adam_step: state shape mismatch");
    }
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (size_t i = 0; i < params.size(); ++i) {
    auto& p = *params[i];
    auto& m = state.m[i];
    auto& v = state.v[i];
    const bool has_grad = p.grad.size() == p.values.size();
    for (size_t j = 0; j < p.values.size(); ++j) {
      const double g = has_grad ? p.grad[j] : 0.0;
      m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g;
      v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g * g;
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      p.values[j] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
  }
}

}  // namespace demotif::nn
