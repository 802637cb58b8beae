#pragma once

#include <vector>

#include "demotif/pwm.hpp"
#include "demotif/seq.hpp"

namespace demotif {

// Average motif affinity against a uniform 0.25 background: the mean over
// all offsets of prod_i p[i, base(t+i)] / 0.25. Forward strand only;
// the sequence must be N-free and at least as long as the motif.
double ama_score(const Pwm& pwm, const Sequence& seq);

struct AffinityReport {
  std::vector<double> scores_a;
  std::vector<double> scores_b;
  std::vector<int> winner;  // +1 a, -1 b, 0 tie, per sequence
  int a_wins = 0;
  int b_wins = 0;
  int ties = 0;
  double mean_a = 0.0, median_a = 0.0;
  double mean_b = 0.0, median_b = 0.0;

  double win_fraction_a() const;
};

AffinityReport compare_on_sequences(const Pwm& pwm_a, const Pwm& pwm_b,
                                    const std::vector<Sequence>& seqs);

struct SimilarityResult {
  int best_offset = 0;
  double score = 0.0;  // mean per-column Pearson correlation, in [-1,1]
};

// Slides the narrower PWM over the wider one (no gaps, forward strand) and
// returns the offset maximizing the mean per-column Pearson correlation.
// Constant columns correlate as 0.
SimilarityResult motif_similarity(const Pwm& pwm_a, const Pwm& pwm_b);

}  // namespace demotif
