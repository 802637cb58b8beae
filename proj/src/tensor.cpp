#include "demotif/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace demotif::nn {

namespace {

int64_t shape_product(const std::vector<int>& shape) {
  if (shape.empty()) throw std::invalid_argument("Tensor: empty shape");
  int64_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw std::invalid_argument("Tensor: dimensions must be positive");
    n *= d;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<int> shape_in, double fill) : shape(std::move(shape_in)) {
  values.assign(static_cast<size_t>(shape_product(shape)), fill);
}

Tensor::Tensor(std::vector<int> shape_in, std::vector<double> values_in)
    : shape(std::move(shape_in)), values(std::move(values_in)) {
  if (static_cast<int64_t>(values.size()) != shape_product(shape)) {
    throw std::invalid_argument("Tensor: values length does not match shape");
  }
}

void Tensor::ensure_grad() {
  if (grad.size() != values.size()) grad.assign(values.size(), 0.0);
}

void Tensor::zero_grad() {
  if (grad.size() != values.size()) {
    grad.assign(values.size(), 0.0);
  } else {
    std::fill(grad.begin(), grad.end(), 0.0);
  }
}

bool Tensor::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

TensorPtr make_tensor(std::vector<int> shape, double fill) {
  return std::make_shared<Tensor>(std::move(shape), fill);
}

TensorPtr make_tensor(std::vector<int> shape, std::vector<double> values) {
  return std::make_shared<Tensor>(std::move(shape), std::move(values));
}

TensorPtr clone_tensor(const TensorPtr& t) {
  auto c = std::make_shared<Tensor>();
  c->shape = t->shape;
  c->values = t->values;
  return c;
}

}  // namespace demotif::nn
