#include "demotif/runconfig.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace demotif {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int out = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw std::runtime_error("config: invalid integer for '" + key + "': '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw std::runtime_error("config: invalid number for '" + key + "': '" + v + "'");
  }
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(to_int(key, trim(tok)));
  if (out.empty()) throw std::runtime_error("config: empty list for '" + key + "'");
  return out;
}

}  // namespace

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  RunConfig cfg;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: line " + std::to_string(line_no) +
                               " is not key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      cfg.set(key, value);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(e.what()) + " (line " +
                               std::to_string(line_no) + ")");
    }
  }
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "n_conv_layers") model.n_conv_layers = to_int(key, value);
  else if (key == "conv_units") model.conv_units = to_int(key, value);
  else if (key == "filter_len") model.filter_len = to_int(key, value);
  else if (key == "pool") model.pool_per_layer = to_int_list(key, value);
  else if (key == "n_highway_layers") model.n_highway_layers = to_int(key, value);
  else if (key == "mlp_units") model.mlp_units = to_int(key, value);
  else if (key == "dropout_rate") model.dropout_rate = to_double(key, value);
  else if (key == "input_len") model.input_len = to_int(key, value);
  else if (key == "epochs") train.epochs = to_int(key, value);
  else if (key == "batch_size") train.batch_size = to_int(key, value);
  else if (key == "learning_rate") train.learning_rate = to_double(key, value);
  else if (key == "seed") train.seed = static_cast<uint64_t>(to_int(key, value));
  else if (key == "patience") train.patience = to_int(key, value);
  else if (key == "train_frac") train_frac = to_double(key, value);
  else if (key == "lambda") extract.lambda = to_double(key, value);
  else if (key == "step_size") extract.step_size = to_double(key, value);
  else if (key == "max_iters") extract.max_iters = to_int(key, value);
  else if (key == "tol") extract.tol = to_double(key, value);
  else if (key == "laplace_alpha") extract.laplace_alpha = to_double(key, value);
  else if (key == "reg_sign") extract.reg_sign = to_double(key, value);
  else if (key == "motif_width") motif_width = to_int(key, value);
  else if (key == "data") data_path = value;
  else if (key == "n_pos") n_pos = to_int(key, value);
  else if (key == "n_neg") n_neg = to_int(key, value);
  else if (key == "planted_consensus") planted_consensus = value;
  else if (key == "planted_pwm") planted_pwm_path = value;
  else if (key == "negatives") negatives = value;
  else if (key == "out_dir") out_dir = value;
  else throw std::runtime_error("config: unknown key '" + key + "'");
}

void RunConfig::validate() {
  // A single pool value is shorthand for every conv layer.
  if (model.pool_per_layer.size() == 1 && model.n_conv_layers > 1) {
    model.pool_per_layer.assign(static_cast<size_t>(model.n_conv_layers),
                                model.pool_per_layer[0]);
  }
  model.validate();
  train.validate();
  extract.validate();
  if (motif_width < 1 || motif_width > model.input_len) {
    throw std::runtime_error("config: motif_width must be in [1, input_len]");
  }
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw std::runtime_error("config: train_frac must be in (0,1)");
  }
  if (data_path.empty()) {
    if (n_pos < 1 || n_neg < 1) {
      throw std::runtime_error("config: n_pos and n_neg must be >= 1");
    }
    if (negatives != "shuffle" && negatives != "uniform") {
      throw std::runtime_error("config: negatives must be 'shuffle' or 'uniform'");
    }
    if (negatives == "shuffle" && n_pos != n_neg) {
      throw std::runtime_error("config: shuffled negatives are one per positive; set n_neg = n_pos");
    }
    if (planted_pwm_path.empty()) {
      for (char c : planted_consensus) {
        if (!is_base(c)) {
          throw std::runtime_error("config: planted_consensus must be over ACGT");
        }
      }
      if (planted_consensus.empty()) {
        throw std::runtime_error("config: planted_consensus is empty");
      }
    }
  }
  if (out_dir.empty()) throw std::runtime_error("config: out_dir is empty");
}

}  // namespace demotif
