#include "demotif/score.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace demotif {

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Pearson correlation of two 4-vectors; 0 when either is constant.
double column_correlation(const double* a, const double* b) {
  double ma = 0.0, mb = 0.0;
  for (int i = 0; i < kAlphabetSize; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= kAlphabetSize;
  mb /= kAlphabetSize;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (int i = 0; i < kAlphabetSize; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace

double ama_score(const Pwm& pwm, const Sequence& seq) {
  const int w = pwm.width();
  const int len = static_cast<int>(seq.bases.size());
  if (w > len) {
    throw std::invalid_argument("ama_score: motif wider than sequence");
  }
  std::vector<int> base_idx(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) {
    const char c = seq.bases[static_cast<size_t>(i)];
    if (!is_base(c)) {
      throw std::invalid_argument("ama_score: sequence contains a non-ACGT base");
    }
    base_idx[static_cast<size_t>(i)] = base_index(c);
  }
  const int n_offsets = len - w + 1;
  double sum = 0.0;
  for (int t = 0; t < n_offsets; ++t) {
    double odds = 1.0;
    for (int i = 0; i < w; ++i) {
      odds *= pwm.at(i, base_idx[static_cast<size_t>(t + i)]) * 4.0;
    }
    sum += odds;
  }
  return sum / static_cast<double>(n_offsets);
}

double AffinityReport::win_fraction_a() const {
  const int n = a_wins + b_wins + ties;
  return n == 0 ? 0.0 : static_cast<double>(a_wins) / static_cast<double>(n);
}

AffinityReport compare_on_sequences(const Pwm& pwm_a, const Pwm& pwm_b,
                                    const std::vector<Sequence>& seqs) {
  if (seqs.empty()) {
    throw std::invalid_argument("compare_on_sequences: no sequences");
  }
  AffinityReport report;
  const auto n = static_cast<int64_t>(seqs.size());
  report.scores_a.resize(static_cast<size_t>(n));
  report.scores_b.resize(static_cast<size_t>(n));
  report.winner.resize(static_cast<size_t>(n));
#pragma omp parallel for schedule(static) if (n > 16)
  for (int64_t i = 0; i < n; ++i) {
    report.scores_a[static_cast<size_t>(i)] = ama_score(pwm_a, seqs[static_cast<size_t>(i)]);
    report.scores_b[static_cast<size_t>(i)] = ama_score(pwm_b, seqs[static_cast<size_t>(i)]);
  }
  for (size_t i = 0; i < seqs.size(); ++i) {
    const double a = report.scores_a[i], b = report.scores_b[i];
    if (a > b) {
      report.winner[i] = 1;
      ++report.a_wins;
    } else if (b > a) {
      report.winner[i] = -1;
      ++report.b_wins;
    } else {
      report.winner[i] = 0;
      ++report.ties;
    }
  }
  report.mean_a = mean(report.scores_a);
  report.mean_b = mean(report.scores_b);
  report.median_a = median(report.scores_a);
  report.median_b = median(report.scores_b);
  return report;
}

SimilarityResult motif_similarity(const Pwm& pwm_a, const Pwm& pwm_b) {
  const bool a_narrow = pwm_a.width() <= pwm_b.width();
  const Pwm& narrow = a_narrow ? pwm_a : pwm_b;
  const Pwm& wide = a_narrow ? pwm_b : pwm_a;
  const int wn = narrow.width(), ww = wide.width();
  SimilarityResult best;
  best.score = -2.0;
  for (int offset = 0; offset + wn <= ww; ++offset) {
    double sum = 0.0;
    for (int i = 0; i < wn; ++i) {
      sum += column_correlation(narrow.flat().data() + static_cast<size_t>(i) * kAlphabetSize,
                                wide.flat().data() + static_cast<size_t>(offset + i) * kAlphabetSize);
    }
    const double score = sum / static_cast<double>(wn);
    if (score > best.score) {
      best.score = score;
      best.best_offset = offset;
    }
  }
  return best;
}

}  // namespace demotif
