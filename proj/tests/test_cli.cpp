#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "demotif/pipeline.hpp"
#include "demotif/pwm.hpp"
#include "demotif/runconfig.hpp"

using namespace demotif;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "demotif_cli_tests";

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CmdResult run_cli(const std::string& args) {
  fs::create_directories(kWork);
  const fs::path out = kWork / "stdout.txt";
  const fs::path err = kWork / "stderr.txt";
  const std::string cmd = std::string(DEMOTIF_BIN) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  f << text;
}

// Small enough to train in well under a second.
const char* kTinyConfig =
    "# tiny pipeline config\n"
    "n_conv_layers=1\n"
    "conv_units=8\n"
    "filter_len=5\n"
    "pool=2\n"
    "n_highway_layers=1\n"
    "mlp_units=4\n"
    "dropout_rate=0.1\n"
    "input_len=20\n"
    "epochs=4\n"
    "batch_size=8\n"
    "learning_rate=0.005\n"
    "seed=7\n"
    "patience=4\n"
    "train_frac=0.75\n"
    "lambda=0.01\n"
    "step_size=0.1\n"
    "max_iters=30\n"
    "motif_width=4\n"
    "n_pos=24\n"
    "n_neg=24\n"
    "planted_consensus=TGAC\n";

}  // namespace

TEST_CASE("RunConfig: file parsing, overrides and validation") {
  const fs::path cfg_path = kWork / "cfg.txt";
  write_file(cfg_path, kTinyConfig);
  RunConfig cfg = RunConfig::from_file(cfg_path);
  CHECK(cfg.model.conv_units == 8);
  CHECK(cfg.train.epochs == 4);
  CHECK(cfg.planted_consensus == "TGAC");
  cfg.validate();
  CHECK(cfg.model.pool_per_layer == std::vector<int>{2});

  cfg.set("epochs", "9");  // flag-style override
  CHECK(cfg.train.epochs == 9);

  CHECK_THROWS_WITH_AS(cfg.set("bogus_key", "1"),
                       doctest::Contains("unknown key"), std::runtime_error);
  CHECK_THROWS_AS(cfg.set("epochs", "two"), std::runtime_error);

  write_file(cfg_path, "n_conv_layers=2\npool=1\n");
  RunConfig broadcast = RunConfig::from_file(cfg_path);
  broadcast.validate();
  CHECK(broadcast.model.pool_per_layer == std::vector<int>{1, 1});

  RunConfig bad;
  bad.negatives = "flip";
  CHECK_THROWS_AS(bad.validate(), std::runtime_error);
}

TEST_CASE("cli: version, usage errors and exit codes") {
  CHECK(run_cli("--version").exit_code == 0);
  CHECK(run_cli("--version").out.find("demotif") != std::string::npos);
  CHECK(run_cli("--help").exit_code == 0);

  const auto bogus = run_cli("bogus");
  CHECK(bogus.exit_code == 1);
  CHECK(bogus.err.find("unknown subcommand 'bogus'") != std::string::npos);

  const auto no_args = run_cli("");
  CHECK(no_args.exit_code == 1);

  const auto missing = run_cli("train");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("missing --data") != std::string::npos);

  const auto missing_out = run_cli("train --data x.tsv");
  CHECK(missing_out.exit_code == 1);
  CHECK(missing_out.err.find("missing --out") != std::string::npos);

  // runtime errors (bad files) exit 2
  CHECK(run_cli("eval --checkpoint nope.ckpt --data nope.tsv").exit_code == 2);
}

TEST_CASE("cli: gen-data, train, eval, motif, logo, score pipeline") {
  fs::create_directories(kWork);
  const fs::path planted = kWork / "planted.meme";
  write_file(planted, emit_meme(consensus_pwm("TGAC"), "planted"));
  const fs::path cfg_path = kWork / "cfg.txt";
  write_file(cfg_path, kTinyConfig);

  const fs::path data = kWork / "data.tsv";
  const auto gen = run_cli("gen-data --n-pos 24 --n-neg 24 --length 20 --planted " +
                           planted.string() + " --seed 5 --out " + data.string());
  REQUIRE(gen.exit_code == 0);

  // byte-identical regeneration
  const fs::path data2 = kWork / "data2.tsv";
  run_cli("gen-data --n-pos 24 --n-neg 24 --length 20 --planted " +
          planted.string() + " --seed 5 --out " + data2.string());
  CHECK(slurp(data) == slurp(data2));

  const fs::path ckpt = kWork / "model.ckpt";
  const auto trained = run_cli("train --data " + data.string() + " --config " +
                               cfg_path.string() + " --out " + ckpt.string());
  REQUIRE(trained.exit_code == 0);
  CHECK(trained.out.find("val_auc=") == 0);

  const auto eval = run_cli("eval --checkpoint " + ckpt.string() + " --data " +
                            data.string());
  REQUIRE(eval.exit_code == 0);
  REQUIRE(eval.out.size() >= 11);
  CHECK(eval.out.substr(0, 4) == "auc=");
  CHECK(eval.out[6] != '\n');  // four decimals follow "0."

  const fs::path meme_out = kWork / "motif.meme";
  const fs::path svg_out = kWork / "motif.svg";
  const fs::path pfm_out = kWork / "motif.pfm";
  const auto motif = run_cli("motif --checkpoint " + ckpt.string() +
                             " --lambda 0.01 --iters 20 --width 4 --out-meme " +
                             meme_out.string() + " --out-svg " + svg_out.string() +
                             " --out-pfm " + pfm_out.string());
  REQUIRE(motif.exit_code == 0);
  CHECK(motif.out.find("best_offset=") != std::string::npos);
  CHECK(slurp(meme_out).find("letter-probability matrix") != std::string::npos);
  CHECK(slurp(svg_out).find("<svg") != std::string::npos);
  CHECK(slurp(pfm_out).rfind(">demotif", 0) == 0);

  const fs::path logo_out = kWork / "logo.svg";
  CHECK(run_cli("logo --pwm " + meme_out.string() + " --out " + logo_out.string())
            .exit_code == 0);
  CHECK(slurp(logo_out).find("</svg>") != std::string::npos);

  // the JASPAR emit parses back through the sniffing loader
  CHECK(run_cli("logo --pwm " + pfm_out.string() + " --out " + logo_out.string())
            .exit_code == 0);

  const fs::path report = kWork / "report.tsv";
  const auto score = run_cli("score --meme-a " + meme_out.string() + " --meme-b " +
                             planted.string() + " --data " + data.string() +
                             " --report " + report.string());
  REQUIRE(score.exit_code == 0);
  CHECK(score.out.find("a_wins=") != std::string::npos);
  CHECK(score.out.find("ties=") != std::string::npos);
  const std::string report_text = slurp(report);
  size_t lines = 0;
  for (char c : report_text) lines += c == '\n';
  CHECK(lines == 48);  // one row per sequence
}

TEST_CASE("end_to_end pipeline: summary schema and reproducibility") {
  const fs::path cfg_path = kWork / "pipe_cfg.txt";
  write_file(cfg_path, kTinyConfig);

  RunConfig cfg = RunConfig::from_file(cfg_path);
  cfg.out_dir = (kWork / "pipe_a").string();
  const PipelineResult a = end_to_end(cfg);
  CHECK(fs::exists(a.out_dir / "model.ckpt"));
  CHECK(fs::exists(a.out_dir / "motif.meme"));
  CHECK(fs::exists(a.out_dir / "motif.svg"));
  CHECK(fs::exists(a.out_dir / "dataset.tsv"));

  const std::string summary = slurp(a.out_dir / "summary.json");
  for (const char* key : {"\"auc\"", "\"best_offset\"", "\"similarity\"",
                          "\"win_fraction\""}) {
    CHECK(summary.find(key) != std::string::npos);
  }
  CHECK(a.auc >= 0.0);
  CHECK(a.auc <= 1.0);
  CHECK(a.best_offset >= 0);
  CHECK(a.best_offset + 4 <= cfg.model.input_len);

  RunConfig cfg_b = RunConfig::from_file(cfg_path);
  cfg_b.out_dir = (kWork / "pipe_b").string();
  const PipelineResult b = end_to_end(cfg_b);
  CHECK(slurp(a.out_dir / "model.ckpt") == slurp(b.out_dir / "model.ckpt"));
  CHECK(slurp(a.out_dir / "motif.meme") == slurp(b.out_dir / "motif.meme"));
  CHECK(slurp(a.out_dir / "summary.json") == slurp(b.out_dir / "summary.json"));

  // width passes through to the window
  CHECK(summary.find("\"best_width\": 4") != std::string::npos);
}

TEST_CASE("cli run: executes the pipeline and prints the summary") {
  const fs::path cfg_path = kWork / "run_cfg.txt";
  write_file(cfg_path, kTinyConfig);
  const fs::path out_dir = kWork / "run_out";
  const auto r = run_cli("run --config " + cfg_path.string() + " --out-dir " +
                         out_dir.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("\"auc\"") != std::string::npos);
  CHECK(fs::exists(out_dir / "summary.json"));

  CHECK(run_cli("run").exit_code == 1);
}
