#include "demotif/seq.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "demotif/rng.hpp"

namespace demotif {

namespace {

void validate_bases(const std::string& bases, size_t line_no) {
  for (char c : bases) {
    if (!is_base(c) && c != 'N') {
      std::ostringstream msg;
      msg << "invalid character '" << c << "' at line " << line_no;
      throw std::runtime_error(msg.str());
    }
  }
}

char sample_base(const Pwm& pwm, int pos, Rng& rng) {
  const double u = rng.uniform01();
  double cum = 0.0;
  for (int b = 0; b < kAlphabetSize; ++b) {
    cum += pwm.at(pos, b);
    if (u < cum) return kAlphabet[b];
  }
  return kAlphabet[kAlphabetSize - 1];
}

std::string random_bases(int length, Rng& rng) {
  std::string s(static_cast<size_t>(length), 'A');
  for (auto& c : s) c = kAlphabet[rng.below(kAlphabetSize)];
  return s;
}

}  // namespace

bool Dataset::has_both_labels() const {
  bool pos = false, neg = false;
  for (const auto& s : sequences) (s.label == 1 ? pos : neg) = true;
  return pos && neg;
}

Dataset parse_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file: " + path.string());
  }
  Dataset ds;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t t1 = line.find('\t');
    const size_t t2 = t1 == std::string::npos ? std::string::npos
                                              : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos ||
        line.find('\t', t2 + 1) != std::string::npos) {
      std::ostringstream msg;
      msg << "malformed line " << line_no << ": expected id<TAB>bases<TAB>label";
      throw std::runtime_error(msg.str());
    }
    Sequence seq;
    seq.id = line.substr(0, t1);
    seq.bases = line.substr(t1 + 1, t2 - t1 - 1);
    const std::string label = line.substr(t2 + 1);
    if (seq.bases.empty()) {
      std::ostringstream msg;
      msg << "empty sequence at line " << line_no;
      throw std::runtime_error(msg.str());
    }
    validate_bases(seq.bases, line_no);
    if (label == "0") {
      seq.label = 0;
    } else if (label == "1") {
      seq.label = 1;
    } else {
      std::ostringstream msg;
      msg << "invalid label '" << label << "' at line " << line_no
          << " (expected 0 or 1)";
      throw std::runtime_error(msg.str());
    }
    if (ds.sequences.empty()) {
      ds.length = static_cast<int>(seq.bases.size());
    } else if (static_cast<int>(seq.bases.size()) != ds.length) {
      std::ostringstream msg;
      msg << "inconsistent sequence length at line " << line_no << " (got "
          << seq.bases.size() << ", expected " << ds.length << ")";
      throw std::runtime_error(msg.str());
    }
    ds.sequences.push_back(std::move(seq));
  }
  return ds;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write dataset file: " + path.string());
  }
  for (const auto& s : ds.sequences) {
    out << s.id << '\t' << s.bases << '\t' << s.label << '\n';
  }
}

OneHotMatrix encode_one_hot(const Sequence& seq) {
  OneHotMatrix m;
  m.length = static_cast<int>(seq.bases.size());
  m.values.assign(static_cast<size_t>(m.length) * kAlphabetSize, 0.0);
  for (int i = 0; i < m.length; ++i) {
    const char c = seq.bases[static_cast<size_t>(i)];
    double* row = m.values.data() + static_cast<size_t>(i) * kAlphabetSize;
    if (c == 'N') {
      for (int b = 0; b < kAlphabetSize; ++b) row[b] = 0.25;
    } else {
      row[base_index(c)] = 1.0;
    }
  }
  return m;
}

std::string decode_one_hot(const OneHotMatrix& m) {
  std::string s(static_cast<size_t>(m.length), 'A');
  for (int i = 0; i < m.length; ++i) {
    int best = 0;
    for (int b = 1; b < kAlphabetSize; ++b) {
      if (m.at(i, b) > m.at(i, best)) best = b;
    }
    s[static_cast<size_t>(i)] = kAlphabet[best];
  }
  return s;
}

Dataset generate_synthetic(int n_pos, int n_neg, int length, const Pwm& planted,
                           uint64_t seed) {
  if (n_pos < 1 || n_neg < 1) {
    throw std::invalid_argument("generate_synthetic: counts must be >= 1");
  }
  const int w = planted.width();
  if (w > length) {
    throw std::invalid_argument("generate_synthetic: planted PWM wider than sequence length");
  }
  Rng rng(seed);
  Dataset ds;
  ds.length = length;
  ds.sequences.reserve(static_cast<size_t>(n_pos) + n_neg);
  for (int i = 0; i < n_pos; ++i) {
    Sequence s;
    s.id = "pos_" + std::to_string(i);
    s.label = 1;
    s.bases = random_bases(length, rng);
    const int offset = static_cast<int>(rng.below(static_cast<uint64_t>(length - w + 1)));
    for (int j = 0; j < w; ++j) {
      s.bases[static_cast<size_t>(offset + j)] = sample_base(planted, j, rng);
    }
    ds.sequences.push_back(std::move(s));
  }
  for (int i = 0; i < n_neg; ++i) {
    Sequence s;
    s.id = "neg_" + std::to_string(i);
    s.label = 0;
    s.bases = random_bases(length, rng);
    ds.sequences.push_back(std::move(s));
  }
  return ds;
}

std::vector<Sequence> shuffle_negatives(const std::vector<Sequence>& pos,
                                        uint64_t seed) {
  if (pos.empty()) {
    throw std::invalid_argument("shuffle_negatives: empty positive list");
  }
  Rng rng(seed);
  std::vector<Sequence> out;
  out.reserve(pos.size());
  for (const auto& p : pos) {
    Sequence s;
    s.id = p.id + "_shuf";
    s.label = 0;
    std::vector<char> chars(p.bases.begin(), p.bases.end());
    rng.shuffle(chars);
    s.bases.assign(chars.begin(), chars.end());
    out.push_back(std::move(s));
  }
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_frac,
                                  uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw std::invalid_argument("split: train_frac must be in (0,1)");
  }
  if (ds.size() < 2) {
    throw std::invalid_argument("split: need at least 2 sequences");
  }
  Rng rng(seed);
  std::vector<char> in_train(ds.size(), 0);
  for (int label = 0; label <= 1; ++label) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < ds.size(); ++i) {
      if (ds.sequences[i].label == label) idx.push_back(i);
    }
    rng.shuffle(idx);
    const auto n_train =
        static_cast<size_t>(std::llround(train_frac * static_cast<double>(idx.size())));
    for (size_t k = 0; k < n_train && k < idx.size(); ++k) in_train[idx[k]] = 1;
  }
  Dataset train, test;
  train.length = test.length = ds.length;
  for (size_t i = 0; i < ds.size(); ++i) {
    (in_train[i] ? train : test).sequences.push_back(ds.sequences[i]);
  }
  if (train.sequences.empty() || test.sequences.empty()) {
    throw std::invalid_argument("split: train_frac yields an empty partition");
  }
  return {std::move(train), std::move(test)};
}

}  // namespace demotif
