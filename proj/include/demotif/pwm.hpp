#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "demotif/alphabet.hpp"

namespace demotif {

// Position weight matrix: width x 4 row-major probabilities, one row per
// motif position in A,C,G,T order. Rows sum to 1 within 1e-9. Entries of 0
// are legal (raw imported matrices); Laplace-smoothed matrices never have
// them.
class Pwm {
 public:
  Pwm() = default;
  // Validates shape, entry range and row sums.
  explicit Pwm(std::vector<double> probs);

  int width() const { return static_cast<int>(probs_.size()) / kAlphabetSize; }
  double at(int pos, int base) const {
    return probs_[static_cast<size_t>(pos) * kAlphabetSize + base];
  }
  const std::vector<double>& flat() const { return probs_; }

  // Per-position argmax bases, e.g. "ACGT..." (first base wins ties).
  std::string consensus() const;

 private:
  std::vector<double> probs_;
};

Pwm uniform_pwm(int width);

// Deterministic PWM spelling the given string: each column a basis vector.
Pwm consensus_pwm(const std::string& consensus);

// Laplace smoothing of a relaxed width x 4 matrix with entries in [0,1]:
// p[i][j] = (s[i][j] + alpha) / (sum_k s[i][k] + 4 alpha).
Pwm to_pwm(const std::vector<double>& s, int width, double alpha);

// Bits per column against a uniform background: 2 + sum_j p log2 p,
// with 0 log 0 taken as 0. Always in [0,2].
std::vector<double> information_content(const Pwm& pwm);

// MEME minimal motif format.
std::string emit_meme(const Pwm& pwm, const std::string& name);
Pwm parse_meme(const std::string& text, std::string* name_out = nullptr);

// JASPAR PFM: ">name" then four "A [ counts.. ]" rows; counts are
// normalized per column on import.
std::string emit_jaspar(const Pwm& pwm, const std::string& name);
Pwm parse_jaspar(const std::string& text, std::string* name_out = nullptr);

// Sniffs JASPAR (leading '>') vs MEME.
Pwm load_pwm_file(const std::filesystem::path& path,
                  std::string* name_out = nullptr);

void write_text_file(const std::filesystem::path& path,
                     const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace demotif
