#pragma once

#include <filesystem>
#include <optional>

#include "demotif/model.hpp"

namespace demotif {

inline constexpr int kCheckpointFormatVersion = 1;

// Checkpoint layout:
//   bytes 0..4   magic "DEMO1"
//   u32 LE       format version
//   u64 LE       header length in bytes
//   header       JSON: config fields, alphabet order, array manifest
//   payload      per manifest entry, raw little-endian f64 values
// Array order is ModelParams::named() order. Round trips are bit-exact.
void save_checkpoint(const ModelParams& params, const ModelConfig& cfg,
                     const std::filesystem::path& path);

struct Checkpoint {
  ModelParams params;
  ModelConfig config;
};

// expected, when given, is matched against the stored config; a different
// architecture is reported as a shape mismatch.
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<ModelConfig>& expected = std::nullopt);

}  // namespace demotif
