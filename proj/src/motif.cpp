#include "demotif/motif.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace demotif {

using nn::Graph;
using nn::Mode;
using nn::TensorPtr;

void ExtractConfig::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("ExtractConfig: lambda must be >= 0");
  if (!(step_size > 0.0)) throw std::invalid_argument("ExtractConfig: step_size must be > 0");
  if (max_iters < 0) throw std::invalid_argument("ExtractConfig: max_iters must be >= 0");
  if (!(tol >= 0.0)) throw std::invalid_argument("ExtractConfig: tol must be >= 0");
  if (!(laplace_alpha > 0.0)) throw std::invalid_argument("ExtractConfig: laplace_alpha must be > 0");
  if (reg_sign != 1.0 && reg_sign != -1.0) {
    throw std::invalid_argument("ExtractConfig: reg_sign must be +1 or -1");
  }
}

MotifResult extract_motif(const ModelParams& params, const ModelConfig& cfg,
                          const ExtractConfig& ecfg) {
  cfg.validate();
  ecfg.validate();

  // Private copy so concurrent extractions never touch shared grad buffers.
  const ModelParams frozen = params.clone();
  const int len = cfg.input_len;
  const size_t n = static_cast<size_t>(len) * kAlphabetSize;
  auto s = nn::make_tensor({len, kAlphabetSize}, 0.25);

  MotifResult result;
  for (int iter = 0;; ++iter) {
    Graph g(/*train_params=*/false);
    auto logits = forward_graph(g, frozen, cfg, s, Mode::kEval, 0);
    auto probs = g.softmax(logits);
    auto p_pos = g.pick(probs, 1);
    g.backward(p_pos);

    double sq_norm = 0.0;
    for (double v : s->values) sq_norm += v * v;
    const double objective = p_pos->values[0] + ecfg.reg_sign * ecfg.lambda * sq_norm;
    if (!std::isfinite(objective)) {
      throw std::runtime_error("extract_motif: non-finite objective");
    }
    result.objective_trace.push_back(objective);
    result.logit_gap_trace.push_back(logits->values[1] - logits->values[0]);

    if (iter == 0) {
      double grad_norm = 0.0;
      for (double gv : s->grad) grad_norm += gv * gv;
      if (grad_norm == 0.0) {
        std::fprintf(stderr,
                     "warning: extract_motif: input gradient is identically zero; "
                     "the model looks untrained\n");
      }
    }

    const size_t traced = result.objective_trace.size();
    if (traced >= 2 &&
        std::abs(result.objective_trace[traced - 1] - result.objective_trace[traced - 2]) < ecfg.tol) {
      break;
    }
    if (iter >= ecfg.max_iters) break;

    // Ascent on J = p + reg_sign * lambda * ||S||^2, then projection.
    for (size_t i = 0; i < n; ++i) {
      const double dj = s->grad[i] + ecfg.reg_sign * 2.0 * ecfg.lambda * s->values[i];
      s->values[i] = std::clamp(s->values[i] + ecfg.step_size * dj, 0.0, 1.0);
    }
  }

  result.full_pwm = to_pwm(s->values, len, ecfg.laplace_alpha);
  result.ic_per_column = information_content(result.full_pwm);
  result.optimized_input.length = len;
  result.optimized_input.values = s->values;
  return result;
}

Window best_window(const Pwm& full, const std::vector<double>& ic, int width) {
  const int total = full.width();
  if (width < 1 || width > total) {
    throw std::invalid_argument("best_window: width exceeds motif width");
  }
  if (static_cast<int>(ic.size()) != total) {
    throw std::invalid_argument("best_window: IC length does not match PWM width");
  }
  int best_offset = 0;
  double best_sum = -1.0;
  for (int offset = 0; offset + width <= total; ++offset) {
    double sum = 0.0;
    for (int i = 0; i < width; ++i) sum += ic[static_cast<size_t>(offset + i)];
    if (sum > best_sum) {
      best_sum = sum;
      best_offset = offset;
    }
  }
  Window w;
  w.offset = best_offset;
  w.width = width;
  std::vector<double> probs(static_cast<size_t>(width) * kAlphabetSize);
  for (int i = 0; i < width; ++i) {
    for (int b = 0; b < kAlphabetSize; ++b) {
      probs[static_cast<size_t>(i) * kAlphabetSize + b] = full.at(best_offset + i, b);
    }
  }
  w.pwm = Pwm(std::move(probs));
  return w;
}

Window best_window(const MotifResult& m, int width) {
  return best_window(m.full_pwm, m.ic_per_column, width);
}

}  // namespace demotif
