#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "demotif/graph.hpp"
#include "demotif/seq.hpp"
#include "demotif/tensor.hpp"

namespace demotif {

// Architecture hyperparameters. The stock grid is conv layers {3,4} of 128
// length-5 filters with per-layer pooling {2,1}, then {5,7} highway layers
// of 32 units; any positive sizes are accepted as long as the temporal
// length survives the conv stack.
struct ModelConfig {
  int n_conv_layers = 3;
  int conv_units = 128;
  int filter_len = 5;
  std::vector<int> pool_per_layer = {2, 2, 2};  // entries in {1,2}
  int n_highway_layers = 5;
  int mlp_units = 32;
  double dropout_rate = 0.2;
  int input_len = 101;

  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

struct ShapeTrace {
  struct Layer {
    int conv_out_len = 0;
    int pooled_len = 0;
  };
  std::vector<Layer> layers;
  int final_len = 0;     // temporal length entering the global max-pool
  int feature_dim = 0;   // vector width after the global max-pool
};

// Length arithmetic of the conv stack (valid conv, stride 1, ceil-div
// pooling). Throws when a layer's temporal length drops below 1.
ShapeTrace trace_shapes(const ModelConfig& cfg);

struct HighwayParams {
  nn::TensorPtr w_h, b_h, w_t, b_t;
};

struct ModelParams {
  std::vector<nn::TensorPtr> conv_filters;  // per layer: [K, C_in, C_out]
  std::vector<nn::TensorPtr> conv_biases;   // per layer: [C_out]
  nn::TensorPtr proj_w, proj_b;             // [conv_units, mlp_units]
  std::vector<HighwayParams> highway;       // mlp_units square blocks
  nn::TensorPtr out_w, out_b;               // [mlp_units, 2]

  // Flat parameter list in checkpoint order.
  std::vector<nn::TensorPtr> all() const;
  std::vector<std::pair<std::string, nn::TensorPtr>> named() const;
  ModelParams clone() const;
};

// Scaled uniform fan-in init; highway transform-gate biases start at -2 so
// the stack begins near the identity.
ModelParams build_model(const ModelConfig& cfg, uint64_t seed);

// Builds the full forward pass on g and returns the 2-logit node.
// dropout_seed only matters in train mode.
nn::TensorPtr forward_graph(nn::Graph& g, const ModelParams& params,
                            const ModelConfig& cfg, const nn::TensorPtr& input,
                            nn::Mode mode, uint64_t dropout_seed);

struct Prediction {
  std::array<double, 2> logits{};
  double p_positive = 0.0;
};

Prediction forward_model(const ModelParams& params, const ModelConfig& cfg,
                         const OneHotMatrix& x, nn::Mode mode,
                         uint64_t dropout_seed = 0);

struct TrainConfig {
  int epochs = 30;
  int batch_size = 32;
  double learning_rate = 1e-3;
  uint64_t seed = 7;
  int patience = 8;  // epochs without val-AUC improvement before stopping

  void validate() const;
};

struct EpochStats {
  double train_loss = 0.0;
  double val_auc = 0.0;
};

struct TrainResult {
  ModelParams params;  // from the best validation-AUC epoch
  std::vector<EpochStats> history;
  int best_epoch = -1;
  double best_val_auc = 0.0;
};

// Minibatch Adam on softmax cross-entropy. Deterministic given seeds and
// data; the input params are not mutated.
TrainResult train(const ModelParams& init, const ModelConfig& cfg,
                  const TrainConfig& tcfg, const Dataset& train_set,
                  const Dataset& val_set);

// Eval-mode p_positive per sequence, order preserving. Fans out across
// sequences; parameters are shared read-only.
std::vector<double> predict(const ModelParams& params, const ModelConfig& cfg,
                            const Dataset& ds);

// Mann-Whitney rank statistic with average ranks on ties; equals the
// trapezoidal ROC area.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

}  // namespace demotif
