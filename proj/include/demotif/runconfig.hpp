#pragma once

#include <filesystem>
#include <string>

#include "demotif/model.hpp"
#include "demotif/motif.hpp"

namespace demotif {

// One flat key=value config driving the whole pipeline. '#' starts a
// comment. Unknown keys are rejected. Precedence: CLI flag > file > default.
struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  ExtractConfig extract;
  int motif_width = 8;
  double train_frac = 0.8;

  // Data source: an existing TSV, or synthesis from a planted motif.
  std::string data_path;           // when set, synthesis is skipped
  int n_pos = 500;
  int n_neg = 500;
  std::string planted_consensus = "TGACGTCA";
  std::string planted_pwm_path;    // overrides planted_consensus when set
  std::string negatives = "shuffle";  // or "uniform"

  std::string out_dir = "demotif_out";

  static RunConfig from_file(const std::filesystem::path& path);

  // Applies one key=value pair; throws on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  void validate();  // resolves pool broadcasting, then checks everything
};

}  // namespace demotif
