#pragma once

#include <filesystem>

#include "demotif/runconfig.hpp"

namespace demotif {

struct PipelineResult {
  double auc = 0.0;          // held-out AUC of the trained model
  int best_offset = 0;       // offset of the most informative motif window
  double similarity = 0.0;   // window vs planted PWM
  double win_fraction = 0.0; // fraction of positive test seqs the window outscores the planted PWM on
  std::filesystem::path out_dir;
};

// Full single-dataset pipeline: synthesize (or load) data, split, train,
// evaluate, extract the motif, render the logo and score it against the
// planted PWM. Writes dataset TSVs, checkpoint, MEME files, SVG and
// summary.json into cfg.out_dir. Reruns with identical config are
// byte-identical. A stage failure aborts with the stage name in the message.
PipelineResult end_to_end(RunConfig cfg);

}  // namespace demotif
