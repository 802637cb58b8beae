#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "demotif/tensor.hpp"

namespace demotif::nn {

enum class Mode { kTrain, kEval };

// Define-by-run tape. Each op computes its output eagerly and records a
// backward rule; backward() replays the rules in reverse recording order,
// which is reverse topological order by construction.
//
// A graph built with train_params = false skips gradient accumulation into
// layer parameters (conv filters, affine/highway weights); input gradients
// still flow. Used when optimizing the input of a frozen model.
class Graph {
 public:
  explicit Graph(bool train_params = true) : train_params_(train_params) {}

  // Generic node. All ops funnel through this; tests may record custom
  // backward rules directly.
  TensorPtr record(TensorPtr out, std::vector<TensorPtr> inputs,
                   std::function<void()> back);

  // out[t,o] = bias[o] + sum_{k,c} in[t+k,c] * filt[k,c,o]; valid, stride 1.
  TensorPtr conv1d(const TensorPtr& in, const TensorPtr& filt,
                   const TensorPtr& bias);

  TensorPtr relu(const TensorPtr& x);

  // Non-overlapping windows over the first axis; window 1 is the identity;
  // a trailing odd element passes through. Ties route gradient to the
  // first index.
  TensorPtr max_pool1d(const TensorPtr& x, int window);

  // Column maxima of an L x C tensor; gradient to the first argmax.
  TensorPtr global_max_pool(const TensorPtr& x);

  // W^T x + b with x: [din], w: [din, dout], b: [dout].
  TensorPtr affine(const TensorPtr& x, const TensorPtr& w, const TensorPtr& b);

  // t = sigmoid(W_t^T x + b_t), h = relu(W_h^T x + b_h),
  // out = t*h + (1-t)*x.
  TensorPtr highway(const TensorPtr& x, const TensorPtr& w_h,
                    const TensorPtr& b_h, const TensorPtr& w_t,
                    const TensorPtr& b_t);

  // Inverted dropout: train mode zeroes entries with probability rate and
  // scales survivors by 1/(1-rate); eval mode is the identity.
  TensorPtr dropout(const TensorPtr& x, double rate, Mode mode, uint64_t seed);

  // Returns (loss, probs). Loss is computed via log-sum-exp so extreme
  // logit gaps stay finite; backward into logits is probs - one_hot(label).
  std::pair<TensorPtr, TensorPtr> softmax_cross_entropy(const TensorPtr& logits,
                                                        int label);

  TensorPtr softmax(const TensorPtr& logits);

  // Scalar view of one element.
  TensorPtr pick(const TensorPtr& x, int index);

  // Elementwise product of same-shape tensors.
  TensorPtr mul(const TensorPtr& a, const TensorPtr& b);

  // Mean of scalar nodes (used to average per-example losses).
  TensorPtr mean_of(const std::vector<TensorPtr>& scalars);

  bool train_params() const { return train_params_; }
  size_t node_count() const { return nodes_.size(); }

  // Zeroes the gradients of every tensor in the graph, seeds d(loss)=1 and
  // runs all backward rules in reverse. loss must be a scalar output of
  // this graph; calling with anything else (or on an empty graph) throws.
  void backward(const TensorPtr& loss);

 private:
  struct Node {
    TensorPtr out;
    std::vector<TensorPtr> inputs;
    std::function<void()> back;
  };
  std::vector<Node> nodes_;
  bool train_params_;
};

}  // namespace demotif::nn
