#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace demotif::nn {

// Dense n-d array of doubles with a gradient buffer of the same shape.
// All numeric work in the library is 64-bit.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> values;
  std::vector<double> grad;  // sized lazily by Graph::backward

  Tensor() = default;
  explicit Tensor(std::vector<int> shape_in, double fill = 0.0);
  Tensor(std::vector<int> shape_in, std::vector<double> values_in);

  int64_t size() const { return static_cast<int64_t>(values.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }
  int rows() const { return shape.at(0); }
  int cols() const { return shape.at(1); }

  void ensure_grad();
  void zero_grad();
  bool all_finite() const;
};

using TensorPtr = std::shared_ptr<Tensor>;

TensorPtr make_tensor(std::vector<int> shape, double fill = 0.0);
TensorPtr make_tensor(std::vector<int> shape, std::vector<double> values);
TensorPtr clone_tensor(const TensorPtr& t);

}  // namespace demotif::nn
