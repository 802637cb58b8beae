#pragma once

#include <stdexcept>
#include <string>

namespace demotif {

// Canonical base order used everywhere: A, C, G, T. All serialized
// artifacts (checkpoints, MEME files, logos) assume this order.
inline constexpr int kAlphabetSize = 4;
inline constexpr const char kAlphabet[kAlphabetSize + 1] = "ACGT";

inline bool is_base(char c) {
  return c == 'A' || c == 'C' || c == 'G' || c == 'T';
}

inline int base_index(char c) {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default:
      throw std::invalid_argument(std::string("not a DNA base: '") + c + "'");
  }
}

}  // namespace demotif
