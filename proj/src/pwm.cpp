#include "demotif/pwm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace demotif {

namespace {

constexpr double kRowSumTol = 1e-9;

std::string format_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", p);
  return buf;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, const char* what) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("cannot parse ") + what + ": '" + tok + "'");
  }
}

}  // namespace

Pwm::Pwm(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty() || probs_.size() % kAlphabetSize != 0) {
    throw std::invalid_argument("Pwm: matrix must be non-empty W x 4");
  }
  for (int i = 0; i < width(); ++i) {
    double sum = 0.0;
    for (int b = 0; b < kAlphabetSize; ++b) {
      const double p = at(i, b);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("Pwm: entries must lie in [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
      std::ostringstream msg;
      msg << "Pwm: column " << i << " sums to " << sum << ", expected 1";
      throw std::invalid_argument(msg.str());
    }
  }
}

std::string Pwm::consensus() const {
  std::string s(static_cast<size_t>(width()), 'A');
  for (int i = 0; i < width(); ++i) {
    int best = 0;
    for (int b = 1; b < kAlphabetSize; ++b) {
      if (at(i, b) > at(i, best)) best = b;
    }
    s[static_cast<size_t>(i)] = kAlphabet[best];
  }
  return s;
}

Pwm uniform_pwm(int width) {
  if (width < 1) throw std::invalid_argument("uniform_pwm: width must be >= 1");
  return Pwm(std::vector<double>(static_cast<size_t>(width) * kAlphabetSize, 0.25));
}

Pwm consensus_pwm(const std::string& consensus) {
  if (consensus.empty()) {
    throw std::invalid_argument("consensus_pwm: empty consensus");
  }
  std::vector<double> probs(consensus.size() * kAlphabetSize, 0.0);
  for (size_t i = 0; i < consensus.size(); ++i) {
    probs[i * kAlphabetSize + static_cast<size_t>(base_index(consensus[i]))] = 1.0;
  }
  return Pwm(std::move(probs));
}

Pwm to_pwm(const std::vector<double>& s, int width, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("to_pwm: alpha must be > 0");
  if (width < 1 || s.size() != static_cast<size_t>(width) * kAlphabetSize) {
    throw std::invalid_argument("to_pwm: matrix must be W x 4");
  }
  std::vector<double> probs(s.size());
  for (int i = 0; i < width; ++i) {
    const double* row = s.data() + static_cast<size_t>(i) * kAlphabetSize;
    double sum = 0.0;
    for (int b = 0; b < kAlphabetSize; ++b) {
      if (row[b] < 0.0) {
        throw std::invalid_argument("to_pwm: negative entry");
      }
      sum += row[b];
    }
    const double denom = sum + kAlphabetSize * alpha;
    for (int b = 0; b < kAlphabetSize; ++b) {
      probs[static_cast<size_t>(i) * kAlphabetSize + b] = (row[b] + alpha) / denom;
    }
  }
  return Pwm(std::move(probs));
}

std::vector<double> information_content(const Pwm& pwm) {
  std::vector<double> ic(static_cast<size_t>(pwm.width()));
  for (int i = 0; i < pwm.width(); ++i) {
    double h = 0.0;
    for (int b = 0; b < kAlphabetSize; ++b) {
      const double p = pwm.at(i, b);
      if (p > 0.0) h += p * std::log2(p);
    }
    ic[static_cast<size_t>(i)] = 2.0 + h;
  }
  return ic;
}

std::string emit_meme(const Pwm& pwm, const std::string& name) {
  std::ostringstream out;
  out << "MEME version 4\n\n";
  out << "ALPHABET= ACGT\n\n";
  out << "Background letter frequencies\n";
  out << "A 0.25 C 0.25 G 0.25 T 0.25\n\n";
  out << "MOTIF " << name << "\n";
  out << "letter-probability matrix: alength= 4 w= " << pwm.width()
      << " nsites= 20 E= 0\n";
  for (int i = 0; i < pwm.width(); ++i) {
    for (int b = 0; b < kAlphabetSize; ++b) {
      if (b) out << ' ';
      out << format_prob(pwm.at(i, b));
    }
    out << '\n';
  }
  return out.str();
}

Pwm parse_meme(const std::string& text, std::string* name_out) {
  std::istringstream in(text);
  std::string line;
  std::string name;
  bool saw_motif = false;
  int w = -1;
  while (std::getline(in, line)) {
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "MOTIF") {
      if (toks.size() < 2) throw std::runtime_error("MEME: MOTIF line without a name");
      name = toks[1];
      saw_motif = true;
    } else if (saw_motif && toks[0] == "letter-probability") {
      for (size_t i = 1; i + 1 < toks.size(); ++i) {
        if (toks[i] == "alength=" &&
            parse_double(toks[i + 1], "alength") != kAlphabetSize) {
          throw std::runtime_error("MEME: alength must be 4");
        }
        if (toks[i] == "w=") w = static_cast<int>(parse_double(toks[i + 1], "w"));
      }
      if (w < 1) throw std::runtime_error("MEME: missing or invalid w=");
      break;
    }
  }
  if (!saw_motif) throw std::runtime_error("MEME: no MOTIF block found");
  if (w < 1) throw std::runtime_error("MEME: no letter-probability matrix found");

  std::vector<double> probs;
  probs.reserve(static_cast<size_t>(w) * kAlphabetSize);
  int rows = 0;
  while (rows < w && std::getline(in, line)) {
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != kAlphabetSize) {
      throw std::runtime_error("MEME: matrix row must have 4 probabilities");
    }
    double sum = 0.0;
    double row[kAlphabetSize];
    for (int b = 0; b < kAlphabetSize; ++b) {
      row[b] = parse_double(toks[static_cast<size_t>(b)], "probability");
      if (row[b] < 0.0) throw std::runtime_error("MEME: negative probability");
      sum += row[b];
    }
    if (std::abs(sum - 1.0) > 1e-3) {
      throw std::runtime_error("MEME: matrix row does not sum to 1");
    }
    for (int b = 0; b < kAlphabetSize; ++b) probs.push_back(row[b] / sum);
    ++rows;
  }
  if (rows != w) throw std::runtime_error("MEME: truncated matrix");
  if (name_out) *name_out = name;
  return Pwm(std::move(probs));
}

std::string emit_jaspar(const Pwm& pwm, const std::string& name) {
  std::ostringstream out;
  out << '>' << name << '\n';
  for (int b = 0; b < kAlphabetSize; ++b) {
    out << kAlphabet[b] << " [";
    for (int i = 0; i < pwm.width(); ++i) out << ' ' << format_prob(pwm.at(i, b));
    out << " ]\n";
  }
  return out.str();
}

Pwm parse_jaspar(const std::string& text, std::string* name_out) {
  std::istringstream in(text);
  std::string line;
  std::string name;
  std::vector<std::vector<double>> rows(kAlphabetSize);
  bool seen[kAlphabetSize] = {false, false, false, false};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '>') {
      auto toks = split_ws(line.substr(1));
      name = toks.empty() ? "" : toks[0];
      continue;
    }
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0].size() != 1 || !is_base(toks[0][0])) {
      throw std::runtime_error("JASPAR: expected base row, got '" + line + "'");
    }
    const int b = base_index(toks[0][0]);
    if (seen[b]) throw std::runtime_error("JASPAR: duplicate base row");
    seen[b] = true;
    for (size_t i = 1; i < toks.size(); ++i) {
      if (toks[i] == "[" || toks[i] == "]") continue;
      std::string tok = toks[i];
      if (!tok.empty() && tok.front() == '[') tok.erase(tok.begin());
      if (!tok.empty() && tok.back() == ']') tok.pop_back();
      if (tok.empty()) continue;
      rows[static_cast<size_t>(b)].push_back(parse_double(tok, "count"));
    }
  }
  for (int b = 0; b < kAlphabetSize; ++b) {
    if (!seen[b]) throw std::runtime_error("JASPAR: missing base row");
  }
  const size_t w = rows[0].size();
  if (w == 0) throw std::runtime_error("JASPAR: empty matrix");
  for (int b = 1; b < kAlphabetSize; ++b) {
    if (rows[static_cast<size_t>(b)].size() != w) {
      throw std::runtime_error("JASPAR: ragged matrix");
    }
  }
  std::vector<double> probs(w * kAlphabetSize);
  for (size_t i = 0; i < w; ++i) {
    double sum = 0.0;
    for (int b = 0; b < kAlphabetSize; ++b) {
      const double c = rows[static_cast<size_t>(b)][i];
      if (c < 0.0) throw std::runtime_error("JASPAR: negative count");
      sum += c;
    }
    if (sum <= 0.0) throw std::runtime_error("JASPAR: zero column");
    for (int b = 0; b < kAlphabetSize; ++b) {
      probs[i * kAlphabetSize + static_cast<size_t>(b)] =
          rows[static_cast<size_t>(b)][i] / sum;
    }
  }
  if (name_out) *name_out = name;
  return Pwm(std::move(probs));
}

Pwm load_pwm_file(const std::filesystem::path& path, std::string* name_out) {
  const std::string text = read_text_file(path);
  const size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '>') {
    return parse_jaspar(text, name_out);
  }
  return parse_meme(text, name_out);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace demotif
