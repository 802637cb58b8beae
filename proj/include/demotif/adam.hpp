#pragma once

#include <cstdint>
#include <vector>

#include "demotif/tensor.hpp"

namespace demotif::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment buffers, one pair per parameter tensor, plus the
// shared step counter.
struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  int64_t step = 0;

  static AdamState init_like(const std::vector<TensorPtr>& params);
};

// One bias-corrected update using the gradients currently stored in each
// parameter tensor (an unallocated grad buffer counts as all zeros).
void adam_step(const std::vector<TensorPtr>& params, AdamState& state,
               const AdamConfig& cfg);

}  // namespace demotif::nn
