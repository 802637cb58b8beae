#pragma once

#include <optional>
#include <vector>

#include "demotif/model.hpp"
#include "demotif/pwm.hpp"

namespace demotif {

// Defaults are calibrated on the synthetic planted-motif task: the input
// gradients of a trained model at the uniform start are small, so the
// ascent needs large steps to outrun the L2 decay; the pseudocount has to
// sit below the optimized signal scale or smoothing flattens it away.
struct ExtractConfig {
  double lambda = 0.005;     // L2 regularization weight
  double step_size = 5.0;    // gradient ascent step
  int max_iters = 2000;
  double tol = 1e-7;         // stop when |dJ| between iterations drops below
  double laplace_alpha = 0.01;
  // Sign of the L2 term in the objective J = p_positive + reg_sign * lambda
  // * ||S||^2. The default -1 penalizes large inputs; +1 is available as an
  // escape hatch.
  double reg_sign = -1.0;

  void validate() const;
};

struct Window {
  int offset = 0;
  int width = 0;
  Pwm pwm;
};

struct MotifResult {
  Pwm full_pwm;                       // width = input_len
  std::vector<double> ic_per_column;  // bits, of full_pwm
  std::optional<Window> best;
  std::vector<double> objective_trace;  // J per evaluated iterate
  std::vector<double> logit_gap_trace;  // diagnostic: logit[1] - logit[0]
  OneHotMatrix optimized_input;         // relaxed S, clipped to [0,1]
};

// Projected gradient ascent on the positive-class probability of a frozen
// model, starting from the all-0.25 matrix; each step clips S to [0,1]. The
// model weights are cloned up front and never change. Deterministic.
MotifResult extract_motif(const ModelParams& params, const ModelConfig& cfg,
                          const ExtractConfig& ecfg);

// Most informative width-W window of the full motif: maximal mean column
// IC, first offset on ties.
Window best_window(const MotifResult& m, int width);
Window best_window(const Pwm& full, const std::vector<double>& ic, int width);

}  // namespace demotif
