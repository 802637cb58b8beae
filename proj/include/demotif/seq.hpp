#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "demotif/alphabet.hpp"
#include "demotif/pwm.hpp"

namespace demotif {

// A labeled fixed-length DNA string. label 1 = binding site, 0 = non-site.
struct Sequence {
  std::string id;
  std::string bases;  // over {A,C,G,T,N}
  int label = 0;
};

struct Dataset {
  std::vector<Sequence> sequences;
  int length = 0;  // uniform sequence length in bp

  size_t size() const { return sequences.size(); }
  bool has_both_labels() const;
};

// L x 4 real matrix. Rows of a concrete sequence are basis vectors
// (uniform 0.25 row for N); relaxed matrices from optimization only
// promise entries in [0,1].
struct OneHotMatrix {
  int length = 0;
  std::vector<double> values;  // length x 4 row-major

  double at(int pos, int base) const {
    return values[static_cast<size_t>(pos) * kAlphabetSize + base];
  }
};

// TSV: id<TAB>bases<TAB>label, one record per line, no header.
Dataset parse_dataset(const std::filesystem::path& path);
void write_dataset(const Dataset& ds, const std::filesystem::path& path);

OneHotMatrix encode_one_hot(const Sequence& seq);

// Per-row argmax back to bases; inverse of encode_one_hot for N-free input.
std::string decode_one_hot(const OneHotMatrix& m);

// Positives: uniform background with one PWM-sampled site implanted at a
// uniform offset. Negatives: pure uniform background. Reproducible per seed.
Dataset generate_synthetic(int n_pos, int n_neg, int length,
                           const Pwm& planted, uint64_t seed);

// One negative per positive by uniformly permuting its characters.
// Preserves base composition; labels set to 0.
std::vector<Sequence> shuffle_negatives(const std::vector<Sequence>& pos,
                                        uint64_t seed);

// Disjoint, exhaustive, label-stratified split.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_frac,
                                  uint64_t seed);

}  // namespace demotif
