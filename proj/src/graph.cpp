#include "demotif/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "demotif/kernels.hpp"
#include "demotif/rng.hpp"

namespace demotif::nn {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_matrix(const TensorPtr& t, const char* op) {
  if (t->shape.size() != 2) {
    throw std::invalid_argument(std::string(op) + ": expected a 2-d tensor");
  }
}

void check_vector(const TensorPtr& t, int dim, const char* op) {
  if (t->shape.size() != 1 || t->dim(0) != dim) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

TensorPtr Graph::record(TensorPtr out, std::vector<TensorPtr> inputs,
                        std::function<void()> back) {
  nodes_.push_back(Node{out, std::move(inputs), std::move(back)});
  return out;
}

TensorPtr Graph::conv1d(const TensorPtr& in, const TensorPtr& filt,
                        const TensorPtr& bias) {
  check_matrix(in, "conv1d");
  if (filt->shape.size() != 3) {
    throw std::invalid_argument("conv1d: filters must be K x C_in x C_out");
  }
  const int len = in->dim(0), cin = in->dim(1);
  const int k = filt->dim(0), cout = filt->dim(2);
  if (filt->dim(1) != cin) {
    throw std::invalid_argument("conv1d: filter channel count does not match input");
  }
  check_vector(bias, cout, "conv1d bias");
  if (k > len) {
    throw std::invalid_argument("conv1d: filter longer than input");
  }
  auto out = make_tensor({len - k + 1, cout});
  kernels::conv1d_forward(in->values.data(), len, cin, filt->values.data(), k,
                          cout, bias->values.data(), out->values.data());
  const bool tp = train_params_;
  return record(out, {in, filt, bias}, [=]() {
    kernels::conv1d_backward_input(out->grad.data(), out->dim(0), cout,
                                   filt->values.data(), k, cin,
                                   in->grad.data(), len);
    if (tp) {
      kernels::conv1d_backward_params(in->values.data(), len, cin,
                                      out->grad.data(), out->dim(0), cout, k,
                                      filt->grad.data(), bias->grad.data());
    }
  });
}

TensorPtr Graph::relu(const TensorPtr& x) {
  auto out = make_tensor(x->shape);
  const size_t n = x->values.size();
  for (size_t i = 0; i < n; ++i) out->values[i] = std::max(0.0, x->values[i]);
  return record(out, {x}, [=]() {
    for (size_t i = 0; i < n; ++i) {
      if (x->values[i] > 0.0) x->grad[i] += out->grad[i];
    }
  });
}

TensorPtr Graph::max_pool1d(const TensorPtr& x, int window) {
  check_matrix(x, "max_pool1d");
  if (window != 1 && window != 2) {
    throw std::invalid_argument("max_pool1d: window must be 1 or 2");
  }
  if (window == 1) return x;
  const int len = x->dim(0), c = x->dim(1);
  const int len_out = (len + 1) / 2;
  auto out = make_tensor({len_out, c});
  auto argmax = std::make_shared<std::vector<int>>(
      static_cast<size_t>(len_out) * c);
  for (int p = 0; p < len_out; ++p) {
    const int t0 = 2 * p;
    const int t1 = std::min(t0 + 1, len - 1);
    for (int j = 0; j < c; ++j) {
      const double a = x->values[static_cast<size_t>(t0) * c + j];
      const double b = x->values[static_cast<size_t>(t1) * c + j];
      const int src = (t1 > t0 && b > a) ? t1 : t0;  // first index on ties
      out->values[static_cast<size_t>(p) * c + j] =
          x->values[static_cast<size_t>(src) * c + j];
      (*argmax)[static_cast<size_t>(p) * c + j] = src;
    }
  }
  return record(out, {x}, [=]() {
    for (size_t i = 0; i < out->values.size(); ++i) {
      const int src = (*argmax)[i];
      x->grad[static_cast<size_t>(src) * c + static_cast<int>(i % c)] +=
          out->grad[i];
    }
  });
}

TensorPtr Graph::global_max_pool(const TensorPtr& x) {
  check_matrix(x, "global_max_pool");
  const int len = x->dim(0), c = x->dim(1);
  auto out = make_tensor({c});
  auto argmax = std::make_shared<std::vector<int>>(static_cast<size_t>(c));
  for (int j = 0; j < c; ++j) {
    int best = 0;
    double best_v = x->values[static_cast<size_t>(j)];
    for (int t = 1; t < len; ++t) {
      const double v = x->values[static_cast<size_t>(t) * c + j];
      if (v > best_v) {
        best_v = v;
        best = t;
      }
    }
    out->values[static_cast<size_t>(j)] = best_v;
    (*argmax)[static_cast<size_t>(j)] = best;
  }
  return record(out, {x}, [=]() {
    for (int j = 0; j < c; ++j) {
      x->grad[static_cast<size_t>((*argmax)[static_cast<size_t>(j)]) * c + j] +=
          out->grad[static_cast<size_t>(j)];
    }
  });
}

TensorPtr Graph::affine(const TensorPtr& x, const TensorPtr& w,
                        const TensorPtr& b) {
  if (x->shape.size() != 1 || w->shape.size() != 2 || b->shape.size() != 1 ||
      w->dim(0) != x->dim(0) || w->dim(1) != b->dim(0)) {
    throw std::invalid_argument("affine: shape mismatch");
  }
  const int din = x->dim(0), dout = w->dim(1);
  auto out = make_tensor({dout});
  for (int o = 0; o < dout; ++o) out->values[static_cast<size_t>(o)] = b->values[static_cast<size_t>(o)];
  for (int i = 0; i < din; ++i) {
    const double xi = x->values[static_cast<size_t>(i)];
    const double* wr = w->values.data() + static_cast<size_t>(i) * dout;
    for (int o = 0; o < dout; ++o) out->values[static_cast<size_t>(o)] += xi * wr[o];
  }
  const bool tp = train_params_;
  return record(out, {x, w, b}, [=]() {
    for (int i = 0; i < din; ++i) {
      const double* wr = w->values.data() + static_cast<size_t>(i) * dout;
      double acc = 0.0;
      for (int o = 0; o < dout; ++o) acc += wr[o] * out->grad[static_cast<size_t>(o)];
      x->grad[static_cast<size_t>(i)] += acc;
    }
    if (tp) {
      for (int i = 0; i < din; ++i) {
        const double xi = x->values[static_cast<size_t>(i)];
        double* wg = w->grad.data() + static_cast<size_t>(i) * dout;
        for (int o = 0; o < dout; ++o) wg[o] += xi * out->grad[static_cast<size_t>(o)];
      }
      for (int o = 0; o < dout; ++o) b->grad[static_cast<size_t>(o)] += out->grad[static_cast<size_t>(o)];
    }
  });
}

TensorPtr Graph::highway(const TensorPtr& x, const TensorPtr& w_h,
                         const TensorPtr& b_h, const TensorPtr& w_t,
                         const TensorPtr& b_t) {
  const int d = x->shape.size() == 1 ? x->dim(0) : -1;
  auto square = [&](const TensorPtr& w) {
    return w->shape.size() == 2 && w->dim(0) == d && w->dim(1) == d;
  };
  if (d < 0 || !square(w_h) || !square(w_t) || b_h->size() != d ||
      b_t->size() != d) {
    throw std::invalid_argument("highway: shape mismatch");
  }
  auto pre = [&](const TensorPtr& w, const TensorPtr& b) {
    std::vector<double> a(b->values.begin(), b->values.end());
    for (int i = 0; i < d; ++i) {
      const double xi = x->values[static_cast<size_t>(i)];
      const double* wr = w->values.data() + static_cast<size_t>(i) * d;
      for (int j = 0; j < d; ++j) a[static_cast<size_t>(j)] += xi * wr[j];
    }
    return a;
  };
  auto a_h = std::make_shared<std::vector<double>>(pre(w_h, b_h));
  auto a_t = std::make_shared<std::vector<double>>(pre(w_t, b_t));
  auto gate = std::make_shared<std::vector<double>>(static_cast<size_t>(d));
  auto hidden = std::make_shared<std::vector<double>>(static_cast<size_t>(d));
  auto out = make_tensor({d});
  for (int j = 0; j < d; ++j) {
    const double t = sigmoid((*a_t)[static_cast<size_t>(j)]);
    const double h = std::max(0.0, (*a_h)[static_cast<size_t>(j)]);
    (*gate)[static_cast<size_t>(j)] = t;
    (*hidden)[static_cast<size_t>(j)] = h;
    out->values[static_cast<size_t>(j)] =
        t * h + (1.0 - t) * x->values[static_cast<size_t>(j)];
  }
  const bool tp = train_params_;
  return record(out, {x, w_h, b_h, w_t, b_t}, [=]() {
    std::vector<double> da_t(static_cast<size_t>(d)), da_h(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
      const double g = out->grad[static_cast<size_t>(j)];
      const double t = (*gate)[static_cast<size_t>(j)];
      const double h = (*hidden)[static_cast<size_t>(j)];
      const double xv = x->values[static_cast<size_t>(j)];
      da_t[static_cast<size_t>(j)] = g * (h - xv) * t * (1.0 - t);
      da_h[static_cast<size_t>(j)] =
          (*a_h)[static_cast<size_t>(j)] > 0.0 ? g * t : 0.0;
      x->grad[static_cast<size_t>(j)] += g * (1.0 - t);
    }
    for (int i = 0; i < d; ++i) {
      const double* wtr = w_t->values.data() + static_cast<size_t>(i) * d;
      const double* whr = w_h->values.data() + static_cast<size_t>(i) * d;
      double acc = 0.0;
      for (int j = 0; j < d; ++j) {
        acc += wtr[j] * da_t[static_cast<size_t>(j)] +
               whr[j] * da_h[static_cast<size_t>(j)];
      }
      x->grad[static_cast<size_t>(i)] += acc;
    }
    if (tp) {
      for (int i = 0; i < d; ++i) {
        const double xi = x->values[static_cast<size_t>(i)];
        double* wtg = w_t->grad.data() + static_cast<size_t>(i) * d;
        double* whg = w_h->grad.data() + static_cast<size_t>(i) * d;
        for (int j = 0; j < d; ++j) {
          wtg[j] += xi * da_t[static_cast<size_t>(j)];
          whg[j] += xi * da_h[static_cast<size_t>(j)];
        }
      }
      for (int j = 0; j < d; ++j) {
        b_t->grad[static_cast<size_t>(j)] += da_t[static_cast<size_t>(j)];
        b_h->grad[static_cast<size_t>(j)] += da_h[static_cast<size_t>(j)];
      }
    }
  });
}

TensorPtr Graph::dropout(const TensorPtr& x, double rate, Mode mode,
                         uint64_t seed) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument("dropout: rate must be in [0,1)");
  }
  if (mode == Mode::kEval || rate == 0.0) return x;
  const size_t n = x->values.size();
  auto keep = std::make_shared<std::vector<uint8_t>>(n);
  const double scale = 1.0 / (1.0 - rate);
  Rng rng(seed);
  auto out = make_tensor(x->shape);
  for (size_t i = 0; i < n; ++i) {
    const bool k = rng.uniform01() >= rate;
    (*keep)[i] = k;
    out->values[i] = k ? x->values[i] * scale : 0.0;
  }
  return record(out, {x}, [=]() {
    for (size_t i = 0; i < n; ++i) {
      if ((*keep)[i]) x->grad[i] += out->grad[i] * scale;
    }
  });
}

std::pair<TensorPtr, TensorPtr> Graph::softmax_cross_entropy(
    const TensorPtr& logits, int label) {
  if (logits->shape.size() != 1) {
    throw std::invalid_argument("softmax_cross_entropy: logits must be a vector");
  }
  const int n = logits->dim(0);
  if (label < 0 || label >= n) {
    throw std::invalid_argument("softmax_cross_entropy: label out of range");
  }
  const double m = *std::max_element(logits->values.begin(), logits->values.end());
  auto probs = make_tensor({n});
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    probs->values[static_cast<size_t>(i)] = std::exp(logits->values[static_cast<size_t>(i)] - m);
    z += probs->values[static_cast<size_t>(i)];
  }
  for (int i = 0; i < n; ++i) probs->values[static_cast<size_t>(i)] /= z;
  // -log p[label] written as log(sum exp(l-m)) + m - l[label]: finite even
  // when p[label] underflows.
  auto loss = make_tensor({1});
  loss->values[0] = std::log(z) + m - logits->values[static_cast<size_t>(label)];
  record(loss, {logits}, [=]() {
    const double g = loss->grad[0];
    for (int i = 0; i < n; ++i) {
      logits->grad[static_cast<size_t>(i)] +=
          g * (probs->values[static_cast<size_t>(i)] - (i == label ? 1.0 : 0.0));
    }
  });
  return {loss, probs};
}

TensorPtr Graph::softmax(const TensorPtr& logits) {
  if (logits->shape.size() != 1) {
    throw std::invalid_argument("softmax: logits must be a vector");
  }
  const int n = logits->dim(0);
  const double m = *std::max_element(logits->values.begin(), logits->values.end());
  auto out = make_tensor({n});
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    out->values[static_cast<size_t>(i)] = std::exp(logits->values[static_cast<size_t>(i)] - m);
    z += out->values[static_cast<size_t>(i)];
  }
  for (int i = 0; i < n; ++i) out->values[static_cast<size_t>(i)] /= z;
  return record(out, {logits}, [=]() {
    double dot = 0.0;
    for (int i = 0; i < n; ++i) {
      dot += out->grad[static_cast<size_t>(i)] * out->values[static_cast<size_t>(i)];
    }
    for (int i = 0; i < n; ++i) {
      logits->grad[static_cast<size_t>(i)] +=
          out->values[static_cast<size_t>(i)] * (out->grad[static_cast<size_t>(i)] - dot);
    }
  });
}

TensorPtr Graph::pick(const TensorPtr& x, int index) {
  if (index < 0 || index >= x->size()) {
    throw std::invalid_argument("pick: index out of range");
  }
  auto out = make_tensor({1});
  out->values[0] = x->values[static_cast<size_t>(index)];
  return record(out, {x}, [=]() { x->grad[static_cast<size_t>(index)] += out->grad[0]; });
}

TensorPtr Graph::mul(const TensorPtr& a, const TensorPtr& b) {
  if (a->shape != b->shape) {
    throw std::invalid_argument("mul: shape mismatch");
  }
  auto out = make_tensor(a->shape);
  const size_t n = a->values.size();
  for (size_t i = 0; i < n; ++i) out->values[i] = a->values[i] * b->values[i];
  return record(out, {a, b}, [=]() {
    for (size_t i = 0; i < n; ++i) {
      a->grad[i] += out->grad[i] * b->values[i];
      b->grad[i] += out->grad[i] * a->values[i];
    }
  });
}

TensorPtr Graph::mean_of(const std::vector<TensorPtr>& scalars) {
  if (scalars.empty()) {
    throw std::invalid_argument("mean_of: no inputs");
  }
  for (const auto& s : scalars) {
    if (s->size() != 1) throw std::invalid_argument("mean_of: inputs must be scalars");
  }
  auto out = make_tensor({1});
  double sum = 0.0;
  for (const auto& s : scalars) sum += s->values[0];
  const double inv_n = 1.0 / static_cast<double>(scalars.size());
  out->values[0] = sum * inv_n;
  std::vector<TensorPtr> inputs(scalars.begin(), scalars.end());
  return record(out, inputs, [=]() {
    for (const auto& s : inputs) s->grad[0] += out->grad[0] * inv_n;
  });
}

void Graph::backward(const TensorPtr& loss) {
  if (nodes_.empty()) {
    throw std::logic_error("backward before forward: graph is empty");
  }
  if (loss->size() != 1) {
    throw std::invalid_argument("backward: loss must be a scalar");
  }
  bool found = false;
  for (const auto& n : nodes_) {
    if (n.out == loss) {
      found = true;
      break;
    }
  }
  if (!found) {
    throw std::logic_error("backward before forward: loss is not an output of this graph");
  }
  std::unordered_set<Tensor*> seen;
  for (auto& n : nodes_) {
    if (seen.insert(n.out.get()).second) n.out->zero_grad();
    for (auto& in : n.inputs) {
      if (seen.insert(in.get()).second) in->zero_grad();
    }
  }
  loss->grad[0] = 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) it->back();
}

}  // namespace demotif::nn
