#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "demotif/rng.hpp"
#include "demotif/score.hpp"

using namespace demotif;

namespace {

Sequence seq(const std::string& bases, int label = 1) {
  return {"s", bases, label};
}

std::string random_bases(int len, Rng& rng, const char* alphabet = "ACGT") {
  std::string s;
  for (int i = 0; i < len; ++i) s += alphabet[rng.below(4)];
  return s;
}

}  // namespace

TEST_CASE("ama_score: uniform PWM scores exactly 1") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 1 + static_cast<int>(rng.below(6));
    const int len = w + static_cast<int>(rng.below(40));
    CHECK(ama_score(uniform_pwm(w), seq(random_bases(len, rng))) == 1.0);
  }
}

TEST_CASE("ama_score: hand cases") {
  CHECK(ama_score(consensus_pwm("AC"), seq("AC")) == 16.0);
  CHECK(ama_score(consensus_pwm("AA"), seq("CC")) == 0.0);
  CHECK_THROWS_WITH_AS(ama_score(consensus_pwm("ACGTA"), seq("ACG")),
                       doctest::Contains("wider than"), std::invalid_argument);
  CHECK_THROWS_AS(ama_score(uniform_pwm(2), seq("ANAA")), std::invalid_argument);
}

TEST_CASE("ama_score is strictly monotone in an aligned occurring base") {
  // All-A sequence; move probability mass from T (absent) to A at one column.
  const std::string bases(12, 'A');
  for (int col = 0; col < 3; ++col) {
    std::vector<double> lo(3 * 4, 0.25), hi(3 * 4, 0.25);
    hi[static_cast<size_t>(col) * 4 + 0] = 0.30;
    hi[static_cast<size_t>(col) * 4 + 3] = 0.20;
    CHECK(ama_score(Pwm(hi), seq(bases)) > ama_score(Pwm(lo), seq(bases)));
  }
}

TEST_CASE("compare_on_sequences: identical motifs tie everywhere") {
  Rng rng(5);
  std::vector<Sequence> seqs;
  for (int i = 0; i < 10; ++i) seqs.push_back(seq(random_bases(20, rng)));
  const Pwm pwm = to_pwm({0.9, 0.1, 0.2, 0.4, 0.3, 0.3, 0.2, 0.2}, 2, 0.1);
  const auto report = compare_on_sequences(pwm, pwm, seqs);
  CHECK(report.a_wins == 0);
  CHECK(report.b_wins == 0);
  CHECK(report.ties == 10);
  CHECK(report.win_fraction_a() == 0.0);
}

TEST_CASE("compare_on_sequences: planted motif beats uniform on its own sites") {
  Rng rng(9);
  const Pwm planted = consensus_pwm("TGACGTCA");
  std::vector<Sequence> positives;
  for (int i = 0; i < 40; ++i) {
    std::string b = random_bases(30, rng);
    const auto offset = rng.below(30 - 8 + 1);
    b.replace(static_cast<size_t>(offset), 8, "TGACGTCA");
    positives.push_back(seq(b));
  }
  const auto report = compare_on_sequences(planted, uniform_pwm(8), positives);
  CHECK(report.a_wins == 40);
  CHECK(report.win_fraction_a() == 1.0);
  CHECK(report.mean_a > 1.0);
}

TEST_CASE("compare_on_sequences: empty input and permutation equivariance") {
  CHECK_THROWS_WITH_AS(compare_on_sequences(uniform_pwm(2), uniform_pwm(2), {}),
                       doctest::Contains("no sequences"), std::invalid_argument);

  Rng rng(11);
  std::vector<Sequence> seqs;
  for (int i = 0; i < 8; ++i) seqs.push_back(seq(random_bases(15, rng)));
  const Pwm a = to_pwm({0.9, 0.05, 0.03, 0.02, 0.1, 0.6, 0.2, 0.1}, 2, 0.05);
  const Pwm b = to_pwm({0.2, 0.3, 0.3, 0.2, 0.4, 0.3, 0.2, 0.1}, 2, 0.05);
  const auto fwd = compare_on_sequences(a, b, seqs);
  std::vector<Sequence> reversed(seqs.rbegin(), seqs.rend());
  auto rev = compare_on_sequences(a, b, reversed);
  std::reverse(rev.scores_a.begin(), rev.scores_a.end());
  std::reverse(rev.scores_b.begin(), rev.scores_b.end());
  CHECK(rev.scores_a == fwd.scores_a);
  CHECK(rev.scores_b == fwd.scores_b);
  CHECK(rev.a_wins == fwd.a_wins);
}

TEST_CASE("motif_similarity: identity, alignment recovery, uniform convention") {
  const Pwm pwm = to_pwm({0.9, 0.05, 0.03, 0.02, 0.1, 0.6, 0.2, 0.1,
                          0.05, 0.05, 0.8, 0.1, 0.3, 0.3, 0.2, 0.2},
                         4, 0.05);
  const auto self = motif_similarity(pwm, pwm);
  CHECK(self.best_offset == 0);
  CHECK(self.score == 1.0);

  // a window cut out of a wider motif is found at its true offset
  const Pwm wide = consensus_pwm("TGACGTCA");
  std::vector<double> cut(3 * 4);
  for (int i = 0; i < 3; ++i) {
    for (int b = 0; b < 4; ++b) cut[static_cast<size_t>(i) * 4 + b] = wide.at(3 + i, b);
  }
  const auto found = motif_similarity(Pwm(std::move(cut)), wide);
  CHECK(found.best_offset == 3);
  CHECK(found.score == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(motif_similarity(uniform_pwm(4), pwm).score == 0.0);
  CHECK(motif_similarity(uniform_pwm(3), uniform_pwm(5)).score == 0.0);
}

TEST_CASE("motif_similarity is symmetric in score") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int wa = 2 + static_cast<int>(rng.below(6));
    const int wb = 2 + static_cast<int>(rng.below(6));
    std::vector<double> a(static_cast<size_t>(wa) * 4), b(static_cast<size_t>(wb) * 4);
    for (auto& v : a) v = rng.uniform01();
    for (auto& v : b) v = rng.uniform01();
    const Pwm pa = to_pwm(a, wa, 0.1), pb = to_pwm(b, wb, 0.1);
    CHECK(motif_similarity(pa, pb).score == motif_similarity(pb, pa).score);
    CHECK(motif_similarity(pa, pb).best_offset == motif_similarity(pb, pa).best_offset);
  }
}
