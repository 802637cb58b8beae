#include "demotif/model.hpp"

#include "demotif/adam.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "demotif/rng.hpp"

namespace demotif {

using nn::Graph;
using nn::Mode;
using nn::TensorPtr;

void ModelConfig::validate() const {
  if (n_conv_layers < 1) throw std::invalid_argument("ModelConfig: need at least one conv layer");
  if (conv_units < 1) throw std::invalid_argument("ModelConfig: conv_units must be positive");
  if (filter_len < 1) throw std::invalid_argument("ModelConfig: filter_len must be positive");
  if (static_cast<int>(pool_per_layer.size()) != n_conv_layers) {
    throw std::invalid_argument("ModelConfig: pool_per_layer must have one entry per conv layer");
  }
  for (int p : pool_per_layer) {
    if (p != 1 && p != 2) throw std::invalid_argument("ModelConfig: pool entries must be 1 or 2");
  }
  if (n_highway_layers < 0) throw std::invalid_argument("ModelConfig: n_highway_layers must be >= 0");
  if (mlp_units < 1) throw std::invalid_argument("ModelConfig: mlp_units must be positive");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw std::invalid_argument("ModelConfig: dropout_rate must be in [0,1)");
  }
  if (input_len < 1) throw std::invalid_argument("ModelConfig: input_len must be positive");
  trace_shapes(*this);  // throws on temporal underflow
}

ShapeTrace trace_shapes(const ModelConfig& cfg) {
  ShapeTrace trace;
  int len = cfg.input_len;
  for (int l = 0; l < cfg.n_conv_layers; ++l) {
    const int conv_out = len - cfg.filter_len + 1;
    if (conv_out < 1) {
      std::ostringstream msg;
      msg << "ModelConfig: temporal length underflows at conv layer " << l
          << " (length " << len << ", filter " << cfg.filter_len << ")";
      throw std::invalid_argument(msg.str());
    }
    const int pooled = cfg.pool_per_layer[static_cast<size_t>(l)] == 2
                           ? (conv_out + 1) / 2
                           : conv_out;
    trace.layers.push_back({conv_out, pooled});
    len = pooled;
  }
  trace.final_len = len;
  trace.feature_dim = cfg.conv_units;
  return trace;
}

std::vector<TensorPtr> ModelParams::all() const {
  std::vector<TensorPtr> out;
  for (size_t l = 0; l < conv_filters.size(); ++l) {
    out.push_back(conv_filters[l]);
    out.push_back(conv_biases[l]);
  }
  out.push_back(proj_w);
  out.push_back(proj_b);
  for (const auto& h : highway) {
    out.push_back(h.w_h);
    out.push_back(h.b_h);
    out.push_back(h.w_t);
    out.push_back(h.b_t);
  }
  out.push_back(out_w);
  out.push_back(out_b);
  return out;
}

std::vector<std::pair<std::string, TensorPtr>> ModelParams::named() const {
  std::vector<std::pair<std::string, TensorPtr>> out;
  for (size_t l = 0; l < conv_filters.size(); ++l) {
    out.emplace_back("conv" + std::to_string(l) + ".filters", conv_filters[l]);
    out.emplace_back("conv" + std::to_string(l) + ".bias", conv_biases[l]);
  }
  out.emplace_back("proj.w", proj_w);
  out.emplace_back("proj.b", proj_b);
  for (size_t l = 0; l < highway.size(); ++l) {
    const std::string p = "highway" + std::to_string(l);
    out.emplace_back(p + ".w_h", highway[l].w_h);
    out.emplace_back(p + ".b_h", highway[l].b_h);
    out.emplace_back(p + ".w_t", highway[l].w_t);
    out.emplace_back(p + ".b_t", highway[l].b_t);
  }
  out.emplace_back("out.w", out_w);
  out.emplace_back("out.b", out_b);
  return out;
}

ModelParams ModelParams::clone() const {
  ModelParams c;
  for (const auto& t : conv_filters) c.conv_filters.push_back(nn::clone_tensor(t));
  for (const auto& t : conv_biases) c.conv_biases.push_back(nn::clone_tensor(t));
  c.proj_w = nn::clone_tensor(proj_w);
  c.proj_b = nn::clone_tensor(proj_b);
  for (const auto& h : highway) {
    c.highway.push_back({nn::clone_tensor(h.w_h), nn::clone_tensor(h.b_h),
                         nn::clone_tensor(h.w_t), nn::clone_tensor(h.b_t)});
  }
  c.out_w = nn::clone_tensor(out_w);
  c.out_b = nn::clone_tensor(out_b);
  return c;
}

namespace {

TensorPtr uniform_init(std::vector<int> shape, int fan_in, Rng& rng) {
  auto t = nn::make_tensor(std::move(shape));
  const double limit = std::sqrt(1.0 / static_cast<double>(fan_in));
  for (auto& v : t->values) v = rng.uniform(-limit, limit);
  return t;
}

}  // namespace

ModelParams build_model(const ModelConfig& cfg, uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  ModelParams p;
  int cin = kAlphabetSize;
  for (int l = 0; l < cfg.n_conv_layers; ++l) {
    p.conv_filters.push_back(
        uniform_init({cfg.filter_len, cin, cfg.conv_units}, cfg.filter_len * cin, rng));
    p.conv_biases.push_back(nn::make_tensor({cfg.conv_units}, 0.0));
    cin = cfg.conv_units;
  }
  p.proj_w = uniform_init({cfg.conv_units, cfg.mlp_units}, cfg.conv_units, rng);
  p.proj_b = nn::make_tensor({cfg.mlp_units}, 0.0);
  for (int l = 0; l < cfg.n_highway_layers; ++l) {
    HighwayParams h;
    h.w_h = uniform_init({cfg.mlp_units, cfg.mlp_units}, cfg.mlp_units, rng);
    h.b_h = nn::make_tensor({cfg.mlp_units}, 0.0);
    h.w_t = uniform_init({cfg.mlp_units, cfg.mlp_units}, cfg.mlp_units, rng);
    h.b_t = nn::make_tensor({cfg.mlp_units}, -2.0);
    p.highway.push_back(std::move(h));
  }
  p.out_w = uniform_init({cfg.mlp_units, 2}, cfg.mlp_units, rng);
  p.out_b = nn::make_tensor({2}, 0.0);
  return p;
}

TensorPtr forward_graph(Graph& g, const ModelParams& params,
                        const ModelConfig& cfg, const TensorPtr& input,
                        Mode mode, uint64_t dropout_seed) {
  if (input->shape.size() != 2 || input->dim(0) != cfg.input_len ||
      input->dim(1) != kAlphabetSize) {
    throw std::invalid_argument("forward_graph: input length does not match config");
  }
  TensorPtr x = input;
  for (int l = 0; l < cfg.n_conv_layers; ++l) {
    x = g.conv1d(x, params.conv_filters[static_cast<size_t>(l)],
                 params.conv_biases[static_cast<size_t>(l)]);
    x = g.relu(x);
    x = g.max_pool1d(x, cfg.pool_per_layer[static_cast<size_t>(l)]);
    x = g.dropout(x, cfg.dropout_rate, mode,
                  mix_seed(dropout_seed, static_cast<uint64_t>(l)));
  }
  x = g.global_max_pool(x);
  x = g.affine(x, params.proj_w, params.proj_b);
  for (const auto& h : params.highway) {
    x = g.highway(x, h.w_h, h.b_h, h.w_t, h.b_t);
  }
  return g.affine(x, params.out_w, params.out_b);
}

namespace {

double p_positive_from_logits(const TensorPtr& logits) {
  const double m = std::max(logits->values[0], logits->values[1]);
  const double e0 = std::exp(logits->values[0] - m);
  const double e1 = std::exp(logits->values[1] - m);
  return e1 / (e0 + e1);
}

}  // namespace

Prediction forward_model(const ModelParams& params, const ModelConfig& cfg,
                         const OneHotMatrix& x, Mode mode,
                         uint64_t dropout_seed) {
  Graph g;
  auto input = nn::make_tensor({x.length, kAlphabetSize}, x.values);
  auto logits = forward_graph(g, params, cfg, input, mode, dropout_seed);
  Prediction pred;
  pred.logits = {logits->values[0], logits->values[1]};
  pred.p_positive = p_positive_from_logits(logits);
  return pred;
}

void TrainConfig::validate() const {
  if (epochs < 0) throw std::invalid_argument("TrainConfig: epochs must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
  if (patience < 1) throw std::invalid_argument("TrainConfig: patience must be >= 1");
}

TrainResult train(const ModelParams& init, const ModelConfig& cfg,
                  const TrainConfig& tcfg, const Dataset& train_set,
                  const Dataset& val_set) {
  cfg.validate();
  tcfg.validate();
  if (train_set.sequences.empty() || val_set.sequences.empty()) {
    throw std::invalid_argument("train: empty dataset");
  }
  if (train_set.length != cfg.input_len || val_set.length != cfg.input_len) {
    throw std::invalid_argument("train: dataset length does not match config input_len");
  }
  if (!train_set.has_both_labels()) {
    throw std::invalid_argument("train: single-class training set");
  }

  TrainResult result;
  result.params = init.clone();
  if (tcfg.epochs == 0) return result;

  // One-hot inputs are constant across epochs; encode once.
  std::vector<TensorPtr> inputs;
  inputs.reserve(train_set.size());
  for (const auto& s : train_set.sequences) {
    auto m = encode_one_hot(s);
    inputs.push_back(nn::make_tensor({m.length, kAlphabetSize}, std::move(m.values)));
  }
  std::vector<int> val_labels;
  val_labels.reserve(val_set.size());
  for (const auto& s : val_set.sequences) val_labels.push_back(s.label);

  ModelParams params = init.clone();
  auto flat = params.all();
  nn::AdamState adam = nn::AdamState::init_like(flat);
  const nn::AdamConfig adam_cfg{tcfg.learning_rate, 0.9, 0.999, 1e-8};

  ModelParams best = params.clone();
  double best_auc = -1.0;
  int best_epoch = -1;
  int since_improve = 0;

  std::vector<size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), size_t{0});

  for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
    Rng shuffle_rng(mix_seed(tcfg.seed, 0x5a5a0000ULL + static_cast<uint64_t>(epoch)));
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    size_t batch_index = 0;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(tcfg.batch_size)) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(tcfg.batch_size));
      Graph g;
      std::vector<TensorPtr> losses;
      losses.reserve(end - start);
      for (size_t i = start; i < end; ++i) {
        const size_t idx = order[i];
        const uint64_t drop_seed =
            mix_seed(mix_seed(tcfg.seed, (static_cast<uint64_t>(epoch) << 24) | batch_index), idx);
        auto logits = forward_graph(g, params, cfg, inputs[idx], Mode::kTrain, drop_seed);
        auto [loss, probs] = g.softmax_cross_entropy(logits, train_set.sequences[idx].label);
        losses.push_back(loss);
      }
      auto batch_loss = g.mean_of(losses);
      if (!std::isfinite(batch_loss->values[0])) {
        std::ostringstream msg;
        msg << "train: non-finite loss at epoch " << epoch << ", batch " << batch_index;
        throw std::runtime_error(msg.str());
      }
      g.backward(batch_loss);
      nn::adam_step(flat, adam, adam_cfg);
      loss_sum += batch_loss->values[0] * static_cast<double>(end - start);
      ++batch_index;
    }

    EpochStats stats;
    stats.train_loss = loss_sum / static_cast<double>(train_set.size());
    stats.val_auc = auc(predict(params, cfg, val_set), val_labels);
    result.history.push_back(stats);

    if (stats.val_auc > best_auc) {
      best_auc = stats.val_auc;
      best = params.clone();
      best_epoch = epoch;
      since_improve = 0;
    } else if (++since_improve >= tcfg.patience) {
      break;
    }
  }

  result.params = std::move(best);
  result.best_epoch = best_epoch;
  result.best_val_auc = best_auc;
  return result;
}

std::vector<double> predict(const ModelParams& params, const ModelConfig& cfg,
                            const Dataset& ds) {
  if (!ds.sequences.empty() && ds.length != cfg.input_len) {
    throw std::invalid_argument("predict: dataset length does not match config input_len");
  }
  const auto n = static_cast<int64_t>(ds.size());
  std::vector<double> out(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic) if (n > 8)
  for (int64_t i = 0; i < n; ++i) {
    const auto pred = forward_model(params, cfg,
                                    encode_one_hot(ds.sequences[static_cast<size_t>(i)]),
                                    Mode::kEval);
    out[static_cast<size_t>(i)] = pred.p_positive;
  }
  return out;
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("auc: scores and labels differ in length");
  }
  if (scores.empty()) throw std::invalid_argument("auc: empty input");
  int64_t n_pos = 0, n_neg = 0;
  for (int l : labels) (l == 1 ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument("auc: one class absent");
  }
  std::vector<size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Twice the positive rank sum, accumulated in integers so tie-averaged
  // ranks stay exact.
  int64_t twice_rank_sum_pos = 0;
  size_t i = 0;
  while (i < idx.size()) {
    size_t j = i;
    while (j + 1 < idx.size() && scores[idx[j + 1]] == scores[idx[i]]) ++j;
    // 1-based ranks i+1..j+1 share the average (i+j+2)/2.
    const int64_t twice_avg_rank = static_cast<int64_t>(i) + static_cast<int64_t>(j) + 2;
    for (size_t k = i; k <= j; ++k) {
      if (labels[idx[k]] == 1) twice_rank_sum_pos += twice_avg_rank;
    }
    i = j + 1;
  }
  const double u = static_cast<double>(twice_rank_sum_pos) / 2.0 -
                   static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace demotif
