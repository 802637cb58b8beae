#include "demotif/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace demotif {

namespace {

using nlohmann::json;

constexpr char kMagic[5] = {'D', 'E', 'M', 'O', '1'};

void put_u32le(std::ostream& out, uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_u64le(std::ostream& out, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

void put_f64le(std::ostream& out, double d) {
  uint64_t v;
  std::memcpy(&v, &d, 8);
  put_u64le(out, v);
}

uint32_t get_u32le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("truncated checkpoint file");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

uint64_t get_u64le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error("truncated checkpoint file");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64le(std::istream& in) {
  const uint64_t v = get_u64le(in);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

json config_to_json(const ModelConfig& cfg) {
  return json{{"n_conv_layers", cfg.n_conv_layers},
              {"conv_units", cfg.conv_units},
              {"filter_len", cfg.filter_len},
              {"pool_per_layer", cfg.pool_per_layer},
              {"n_highway_layers", cfg.n_highway_layers},
              {"mlp_units", cfg.mlp_units},
              {"dropout_rate", cfg.dropout_rate},
              {"input_len", cfg.input_len}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig cfg;
  cfg.n_conv_layers = j.at("n_conv_layers").get<int>();
  cfg.conv_units = j.at("conv_units").get<int>();
  cfg.filter_len = j.at("filter_len").get<int>();
  cfg.pool_per_layer = j.at("pool_per_layer").get<std::vector<int>>();
  cfg.n_highway_layers = j.at("n_highway_layers").get<int>();
  cfg.mlp_units = j.at("mlp_units").get<int>();
  cfg.dropout_rate = j.at("dropout_rate").get<double>();
  cfg.input_len = j.at("input_len").get<int>();
  return cfg;
}

}  // namespace

void save_checkpoint(const ModelParams& params, const ModelConfig& cfg,
                     const std::filesystem::path& path) {
  const auto named = params.named();
  json arrays = json::array();
  for (const auto& [name, t] : named) {
    arrays.push_back(json{{"name", name}, {"shape", t->shape}});
  }
  const json header{{"format_version", kCheckpointFormatVersion},
                    {"alphabet", "ACGT"},
                    {"config", config_to_json(cfg)},
                    {"arrays", arrays}};
  const std::string header_str = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
  out.write(kMagic, 5);
  put_u32le(out, kCheckpointFormatVersion);
  put_u64le(out, header_str.size());
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
  for (const auto& [name, t] : named) {
    for (double v : t->values) put_f64le(out, v);
  }
  if (!out) throw std::runtime_error("checkpoint write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<ModelConfig>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());

  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, kMagic, 5) != 0) {
    throw std::runtime_error("not a demotif checkpoint: " + path.string());
  }
  const uint32_t version = get_u32le(in);
  if (version != kCheckpointFormatVersion) {
    throw std::runtime_error("unsupported checkpoint format version " +
                             std::to_string(version));
  }
  const uint64_t header_len = get_u64le(in);
  std::string header_str(header_len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw std::runtime_error("truncated checkpoint file");

  json header;
  try {
    header = json::parse(header_str);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("corrupt checkpoint header: ") + e.what());
  }
  if (header.at("alphabet").get<std::string>() != "ACGT") {
    throw std::runtime_error("checkpoint uses an unknown alphabet order");
  }

  Checkpoint ck;
  ck.config = config_from_json(header.at("config"));
  ck.config.validate();
  if (expected && !(ck.config == *expected)) {
    throw std::runtime_error("checkpoint shape mismatch: stored config differs from expected config");
  }

  // Rebuild zeroed parameters of the stored architecture, then overwrite.
  ck.params = build_model(ck.config, 0);
  const auto named = ck.params.named();
  const auto& arrays = header.at("arrays");
  if (arrays.size() != named.size()) {
    throw std::runtime_error("checkpoint shape mismatch: unexpected array count");
  }
  for (size_t i = 0; i < named.size(); ++i) {
    const auto& [name, t] = named[i];
    if (arrays[i].at("name").get<std::string>() != name ||
        arrays[i].at("shape").get<std::vector<int>>() != t->shape) {
      throw std::runtime_error("checkpoint shape mismatch at array '" + name + "'");
    }
    for (auto& v : t->values) v = get_f64le(in);
  }
  // The payload must end exactly here.
  char extra;
  if (in.read(&extra, 1)) {
    throw std::runtime_error("checkpoint has trailing bytes");
  }
  return ck;
}

}  // namespace demotif
