#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "demotif/logo.hpp"
#include "demotif/motif.hpp"
#include "demotif/rng.hpp"

using namespace demotif;

namespace {

// Minimal XML well-formedness check: tag stack balance plus quoted
// attribute sanity. Enough to catch unescaped or dangling markup.
bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '<') {
      if (text[i] == '>') return false;
      ++i;
      continue;
    }
    const size_t close = text.find('>', i);
    if (close == std::string::npos) return false;
    std::string tag = text.substr(i + 1, close - i - 1);
    size_t quotes = 0;
    for (char c : tag) quotes += c == '"';
    if (quotes % 2 != 0) return false;
    if (!tag.empty() && tag.front() == '?') {
      if (tag.back() != '?') return false;
    } else if (!tag.empty() && tag.front() == '/') {
      if (stack.empty()) return false;
      const std::string name = tag.substr(1);
      if (stack.back() != name) return false;
      stack.pop_back();
    } else if (!tag.empty() && tag.back() != '/') {
      const size_t sp = tag.find_first_of(" \t\n");
      stack.push_back(sp == std::string::npos ? tag : tag.substr(0, sp));
    }
    i = close + 1;
  }
  return stack.empty();
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
  size_t count = 0, pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

ModelConfig micro_config() {
  ModelConfig cfg;
  cfg.n_conv_layers = 1;
  cfg.conv_units = 8;
  cfg.filter_len = 5;
  cfg.pool_per_layer = {2};
  cfg.n_highway_layers = 1;
  cfg.mlp_units = 4;
  cfg.dropout_rate = 0.2;  // must be ignored during extraction
  cfg.input_len = 12;
  return cfg;
}

}  // namespace

TEST_CASE("to_pwm: Laplace smoothing formula") {
  const Pwm zeros = to_pwm({0, 0, 0, 0}, 1, 0.1);
  for (int b = 0; b < 4; ++b) CHECK(zeros.at(0, b) == 0.25);

  const Pwm basis = to_pwm({1, 0, 0, 0}, 1, 0.1);
  CHECK(basis.at(0, 0) == doctest::Approx(1.1 / 1.4).epsilon(1e-12));
  CHECK(basis.at(0, 1) == doctest::Approx(0.1 / 1.4).epsilon(1e-12));
  CHECK(basis.at(0, 2) == doctest::Approx(0.1 / 1.4).epsilon(1e-12));
  CHECK(basis.at(0, 3) == doctest::Approx(0.1 / 1.4).epsilon(1e-12));

  CHECK_THROWS_AS(to_pwm({-0.1, 0, 0, 0}, 1, 0.1), std::invalid_argument);
}

TEST_CASE("to_pwm rows sum to 1 for random relaxed matrices") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 1 + static_cast<int>(rng.below(20));
    std::vector<double> s(static_cast<size_t>(w) * 4);
    for (auto& v : s) v = rng.uniform01();
    const Pwm pwm = to_pwm(s, w, 0.05 + rng.uniform01());
    for (int i = 0; i < w; ++i) {
      double sum = 0;
      for (int b = 0; b < 4; ++b) {
        sum += pwm.at(i, b);
        CHECK(pwm.at(i, b) > 0.0);
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("information content: uniform, basis and half-half columns") {
  CHECK(information_content(uniform_pwm(3)) == std::vector<double>{0, 0, 0});
  CHECK(information_content(consensus_pwm("ACGT")) ==
        std::vector<double>{2, 2, 2, 2});

  const Pwm half(std::vector<double>{0.5, 0.5, 0, 0});
  CHECK(information_content(half)[0] == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(20);
    for (auto& v : s) v = rng.uniform01();
    const auto ic = information_content(to_pwm(s, 5, 0.1));
    for (double bits : ic) {
      CHECK(bits >= 0.0);
      CHECK(bits <= 2.0);
    }
  }
}

TEST_CASE("best_window: trivial, peaked and tied cases") {
  // full-width window is the whole motif at offset 0
  const Pwm full = consensus_pwm("ACGTA");
  const auto ic_full = information_content(full);
  const auto whole = best_window(full, ic_full, 5);
  CHECK(whole.offset == 0);
  CHECK(whole.pwm.flat() == full.flat());

  // lone informative column at position 7
  std::vector<double> probs(12 * 4, 0.25);
  probs[7 * 4 + 0] = 1.0;
  probs[7 * 4 + 1] = probs[7 * 4 + 2] = probs[7 * 4 + 3] = 0.0;
  const Pwm peaked(std::move(probs));
  CHECK(best_window(peaked, information_content(peaked), 1).offset == 7);

  // two identical peaks: the earlier offset wins
  std::vector<double> twin(10 * 4, 0.25);
  for (int pos : {2, 6}) {
    twin[static_cast<size_t>(pos) * 4 + 0] = 1.0;
    for (int b = 1; b < 4; ++b) twin[static_cast<size_t>(pos) * 4 + b] = 0.0;
  }
  const Pwm twins(std::move(twin));
  CHECK(best_window(twins, information_content(twins), 3).offset == 0 + 2 - 2);
  CHECK(best_window(twins, information_content(twins), 1).offset == 2);

  CHECK_THROWS_AS(best_window(full, ic_full, 6), std::invalid_argument);
}

TEST_CASE("best_window agrees with an exhaustive scan") {
  Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 6 + static_cast<int>(rng.below(20));
    std::vector<double> s(static_cast<size_t>(w) * 4);
    for (auto& v : s) v = rng.uniform01() * rng.uniform01();
    const Pwm pwm = to_pwm(s, w, 0.02);
    const auto ic = information_content(pwm);
    const int width = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(w)));

    int oracle_offset = 0;
    double oracle_best = -1.0;
    for (int offset = 0; offset + width <= w; ++offset) {
      double mean = 0.0;
      for (int i = 0; i < width; ++i) mean += ic[static_cast<size_t>(offset + i)];
      mean /= width;
      if (mean > oracle_best) {
        oracle_best = mean;
        oracle_offset = offset;
      }
    }
    CHECK(best_window(pwm, ic, width).offset == oracle_offset);
  }
}

TEST_CASE("extract_motif: zero iterations keep the uniform start") {
  const auto cfg = micro_config();
  const auto params = build_model(cfg, 3);
  ExtractConfig ecfg;
  ecfg.max_iters = 0;
  const auto result = extract_motif(params, cfg, ecfg);
  CHECK(result.full_pwm.width() == cfg.input_len);
  for (double v : result.optimized_input.values) CHECK(v == 0.25);
  for (double p : result.full_pwm.flat()) CHECK(p == 0.25);
  CHECK(result.objective_trace.size() == 1);
}

TEST_CASE("extract_motif: a huge penalty drives S to zero and the PWM to uniform") {
  const auto cfg = micro_config();
  const auto params = build_model(cfg, 3);
  ExtractConfig ecfg;
  ecfg.lambda = 1e3;
  ecfg.max_iters = 200;
  ecfg.tol = 0.0;
  const auto result = extract_motif(params, cfg, ecfg);
  // the penalty clamps S near zero; smoothing then lands close to uniform
  for (double v : result.optimized_input.values) CHECK(v <= 0.05);
  for (double p : result.full_pwm.flat()) {
    CHECK(p == doctest::Approx(0.25).epsilon(0.1));
  }
}

TEST_CASE("extract_motif: deterministic, monotone objective, clipped iterates") {
  const auto cfg = micro_config();
  const auto params = build_model(cfg, 19);
  ExtractConfig ecfg;
  ecfg.max_iters = 60;
  ecfg.step_size = 0.05;

  const auto a = extract_motif(params, cfg, ecfg);
  const auto b = extract_motif(params, cfg, ecfg);
  CHECK(a.full_pwm.flat() == b.full_pwm.flat());
  CHECK(a.objective_trace == b.objective_trace);

  CHECK(a.objective_trace.back() >= a.objective_trace.front());

  // iteration boundaries: every prefix run ends inside [0,1]
  for (int iters : {1, 2, 3, 7, 25}) {
    ExtractConfig partial = ecfg;
    partial.max_iters = iters;
    const auto r = extract_motif(params, cfg, partial);
    for (double v : r.optimized_input.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("extract_motif warns but proceeds on a zero model") {
  const auto cfg = micro_config();
  auto params = build_model(cfg, 3);
  for (const auto& t : params.all()) {
    std::fill(t->values.begin(), t->values.end(), 0.0);
  }
  ExtractConfig ecfg;
  ecfg.max_iters = 10;
  const auto result = extract_motif(params, cfg, ecfg);  // stderr warning only
  // with zero input gradients the penalty shrinks S monotonically
  CHECK(result.objective_trace.back() >= result.objective_trace.front());
}

TEST_CASE("MEME emit: exact layout") {
  const std::string text = emit_meme(uniform_pwm(1), "m1");
  CHECK(text ==
        "MEME version 4\n"
        "\n"
        "ALPHABET= ACGT\n"
        "\n"
        "Background letter frequencies\n"
        "A 0.25 C 0.25 G 0.25 T 0.25\n"
        "\n"
        "MOTIF m1\n"
        "letter-probability matrix: alength= 4 w= 1 nsites= 20 E= 0\n"
        "0.250000 0.250000 0.250000 0.250000\n");

  const std::string wide = emit_meme(uniform_pwm(8), "m8");
  CHECK(count_occurrences(wide, "0.250000 0.250000 0.250000 0.250000\n") == 8);
}

TEST_CASE("MEME round trip reproduces probabilities to 1e-6") {
  Rng rng(61);
  for (int trial = 0; trial < 25; ++trial) {
    const int w = 1 + static_cast<int>(rng.below(15));
    std::vector<double> s(static_cast<size_t>(w) * 4);
    for (auto& v : s) v = rng.uniform01();
    const Pwm pwm = to_pwm(s, w, 0.1);

    std::string name;
    const Pwm parsed = parse_meme(emit_meme(pwm, "trip"), &name);
    CHECK(name == "trip");
    REQUIRE(parsed.width() == w);
    for (size_t i = 0; i < pwm.flat().size(); ++i) {
      CHECK(std::abs(parsed.flat()[i] - pwm.flat()[i]) <= 1e-6);
    }
  }
}

TEST_CASE("MEME parser rejects garbage") {
  CHECK_THROWS_AS(parse_meme("not a motif file"), std::runtime_error);
  CHECK_THROWS_AS(
      parse_meme("MOTIF x\nletter-probability matrix: alength= 4 w= 3\n"
                 "0.5 0.5 0.0 0.0\n"),
      std::runtime_error);  // truncated matrix
}

TEST_CASE("JASPAR round trip") {
  const Pwm pwm = to_pwm({0.9, 0.05, 0.2, 0.7, 0.1, 0.8, 0.3, 0.0}, 2, 0.1);
  std::string name;
  const Pwm parsed = parse_jaspar(emit_jaspar(pwm, "jolly"), &name);
  CHECK(name == "jolly");
  REQUIRE(parsed.width() == 2);
  for (size_t i = 0; i < pwm.flat().size(); ++i) {
    CHECK(std::abs(parsed.flat()[i] - pwm.flat()[i]) <= 1e-6);
  }

  // counts normalize on import
  const Pwm counts = parse_jaspar(">m\nA [ 8 0 ]\nC [ 0 8 ]\nG [ 8 0 ]\nT [ 0 8 ]\n");
  CHECK(counts.at(0, 0) == 0.5);
  CHECK(counts.at(1, 1) == 0.5);
}

TEST_CASE("logo SVG: well-formed, empty for uniform, full stacks for consensus") {
  const std::string uniform_svg = render_logo_svg(uniform_pwm(4));
  CHECK(xml_well_formed(uniform_svg));
  CHECK(count_occurrences(uniform_svg, "class=\"base\"") == 0);

  const std::string consensus_svg = render_logo_svg(consensus_pwm("TGACGTCA"));
  CHECK(xml_well_formed(consensus_svg));
  CHECK(count_occurrences(consensus_svg, "class=\"base\"") == 8);
  // a 2-bit column scales its single glyph to the full plot height
  CHECK(count_occurrences(consensus_svg, "scale(0.39 1.67)") == 8);

  const std::string mixed_svg =
      render_logo_svg(to_pwm({1, 0, 0, 0, 0.5, 0.5, 0, 0}, 2, 0.01));
  CHECK(xml_well_formed(mixed_svg));
  CHECK(count_occurrences(mixed_svg, "class=\"base\"") > 2);
}
