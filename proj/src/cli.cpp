#include "demotif/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>

#include "demotif/checkpoint.hpp"
#include "demotif/logo.hpp"
#include "demotif/pipeline.hpp"
#include "demotif/rng.hpp"
#include "demotif/runconfig.hpp"
#include "demotif/score.hpp"

namespace demotif::cli {

namespace {

constexpr const char* kVersion = "demotif 1.0.0 (checkpoint format 1)";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* kUsage =
    "usage: demotif <command> [flags]\n"
    "\n"
    "commands:\n"
    "  gen-data   synthesize a labeled dataset around a planted motif\n"
    "  train      train a classifier on a TSV dataset\n"
    "  eval       print ROC AUC of a checkpoint on a dataset\n"
    "  motif      extract a motif from a checkpoint (MEME + SVG)\n"
    "  logo       render a sequence logo from a motif file\n"
    "  score      compare two motifs on a dataset (average motif affinity)\n"
    "  run        execute the full pipeline from a config file\n"
    "\n"
    "global flags: --version, --help; each command accepts --help\n";

// Parsed `--flag value` pairs; --set may repeat.
struct Flags {
  std::map<std::string, std::string> values;
  std::vector<std::string> sets;
  bool help = false;
};

Flags parse_flags(const std::vector<std::string>& args, size_t start,
                  const std::vector<std::string>& allowed) {
  Flags flags;
  for (size_t i = start; i < args.size(); ++i) {
    const std::string& tok = args[i];
    if (tok == "--help" || tok == "-h") {
      flags.help = true;
      continue;
    }
    if (tok.rfind("--", 0) != 0) {
      throw UsageError("unexpected argument '" + tok + "'");
    }
    bool ok = false;
    for (const auto& a : allowed) {
      if (tok == a) {
        ok = true;
        break;
      }
    }
    if (!ok) throw UsageError("unknown flag " + tok);
    if (i + 1 >= args.size()) throw UsageError("missing value for " + tok);
    const std::string& value = args[++i];
    if (tok == "--set") {
      flags.sets.push_back(value);
    } else if (!flags.values.emplace(tok, value).second) {
      throw UsageError("duplicate flag " + tok);
    }
  }
  return flags;
}

std::string require(const Flags& flags, const std::string& name) {
  const auto it = flags.values.find(name);
  if (it == flags.values.end()) throw UsageError("missing " + name);
  return it->second;
}

std::optional<std::string> optional_flag(const Flags& flags, const std::string& name) {
  const auto it = flags.values.find(name);
  if (it == flags.values.end()) return std::nullopt;
  return it->second;
}

int flag_int(const Flags& flags, const std::string& name, int fallback) {
  const auto v = optional_flag(flags, name);
  if (!v) return fallback;
  try {
    size_t pos = 0;
    const int out = std::stoi(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument(*v);
    return out;
  } catch (const std::exception&) {
    throw UsageError("invalid integer for " + name + ": '" + *v + "'");
  }
}

double flag_double(const Flags& flags, const std::string& name, double fallback) {
  const auto v = optional_flag(flags, name);
  if (!v) return fallback;
  try {
    size_t pos = 0;
    const double out = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument(*v);
    return out;
  } catch (const std::exception&) {
    throw UsageError("invalid number for " + name + ": '" + *v + "'");
  }
}

void apply_sets(RunConfig& cfg, const Flags& flags) {
  for (const auto& kv : flags.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
}

RunConfig load_run_config(const Flags& flags) {
  RunConfig cfg;
  if (const auto path = optional_flag(flags, "--config")) {
    cfg = RunConfig::from_file(*path);
  }
  apply_sets(cfg, flags);
  if (const auto seed = optional_flag(flags, "--seed")) cfg.set("seed", *seed);
  if (const auto out_dir = optional_flag(flags, "--out-dir")) cfg.set("out_dir", *out_dir);
  return cfg;
}

int cmd_gen_data(const std::vector<std::string>& args) {
  const Flags flags = parse_flags(
      args, 1, {"--n-pos", "--n-neg", "--length", "--planted", "--seed", "--out"});
  if (flags.help) {
    std::cout << "usage: demotif gen-data --n-pos N --n-neg N --planted PWM_FILE "
                 "--out FILE [--length 101] [--seed 0]\n";
    return 0;
  }
  const int n_pos = flag_int(flags, "--n-pos", -1);
  const int n_neg = flag_int(flags, "--n-neg", -1);
  if (!optional_flag(flags, "--n-pos")) throw UsageError("missing --n-pos");
  if (!optional_flag(flags, "--n-neg")) throw UsageError("missing --n-neg");
  const int length = flag_int(flags, "--length", 101);
  const auto planted_path = require(flags, "--planted");
  const auto out = require(flags, "--out");
  const auto seed = static_cast<uint64_t>(flag_int(flags, "--seed", 0));

  const Pwm planted = load_pwm_file(planted_path);
  const Dataset ds = generate_synthetic(n_pos, n_neg, length, planted, seed);
  write_dataset(ds, out);
  std::cerr << "wrote " << ds.size() << " sequences to " << out << "\n";
  return 0;
}

int cmd_train(const std::vector<std::string>& args) {
  const Flags flags =
      parse_flags(args, 1, {"--data", "--config", "--seed", "--out", "--set"});
  if (flags.help) {
    std::cout << "usage: demotif train --data FILE --out CHECKPOINT "
                 "[--config FILE] [--seed N] [--set key=value]...\n";
    return 0;
  }
  const auto data_path = require(flags, "--data");
  const auto out = require(flags, "--out");
  RunConfig cfg = load_run_config(flags);
  cfg.validate();

  const Dataset ds = parse_dataset(data_path);
  if (ds.length != cfg.model.input_len) {
    throw std::runtime_error("dataset length " + std::to_string(ds.length) +
                             " does not match input_len " +
                             std::to_string(cfg.model.input_len) +
                             " (set input_len in the config)");
  }
  auto [train_set, val_set] = split(ds, cfg.train_frac, mix_seed(cfg.train.seed, 0x57A7));
  auto params = build_model(cfg.model, cfg.train.seed);
  const TrainResult result = train(params, cfg.model, cfg.train, train_set, val_set);
  for (size_t e = 0; e < result.history.size(); ++e) {
    std::cerr << "epoch " << e << ": loss=" << result.history[e].train_loss
              << " val_auc=" << result.history[e].val_auc << "\n";
  }
  save_checkpoint(result.params, cfg.model, out);
  std::printf("val_auc=%.4f\n", result.best_val_auc);
  std::printf("epochs=%zu\n", result.history.size());
  return 0;
}

int cmd_eval(const std::vector<std::string>& args) {
  const Flags flags = parse_flags(args, 1, {"--checkpoint", "--data"});
  if (flags.help) {
    std::cout << "usage: demotif eval --checkpoint FILE --data FILE\n";
    return 0;
  }
  const auto ck_path = require(flags, "--checkpoint");
  const auto data_path = require(flags, "--data");
  const Checkpoint ck = load_checkpoint(ck_path);
  const Dataset ds = parse_dataset(data_path);
  std::vector<int> labels;
  for (const auto& s : ds.sequences) labels.push_back(s.label);
  const double a = auc(predict(ck.params, ck.config, ds), labels);
  std::printf("auc=%.4f\n", a);
  return 0;
}

int cmd_motif(const std::vector<std::string>& args) {
  const Flags flags = parse_flags(
      args, 1, {"--checkpoint", "--lambda", "--iters", "--width", "--out-meme",
                "--out-svg", "--out-pfm", "--step-size", "--tol", "--alpha",
                "--reg-sign", "--name"});
  if (flags.help) {
    std::cout << "usage: demotif motif --checkpoint FILE [--lambda 0.005] "
                 "[--iters 2000] [--width 8] [--out-meme FILE] [--out-svg FILE]\n"
                 "       [--out-pfm FILE] [--step-size 5] [--tol 1e-7] "
                 "[--alpha 0.01] [--reg-sign -1] [--name demotif]\n";
    return 0;
  }
  const auto ck_path = require(flags, "--checkpoint");
  const Checkpoint ck = load_checkpoint(ck_path);

  ExtractConfig ecfg;
  ecfg.lambda = flag_double(flags, "--lambda", ecfg.lambda);
  ecfg.max_iters = flag_int(flags, "--iters", ecfg.max_iters);
  ecfg.step_size = flag_double(flags, "--step-size", ecfg.step_size);
  ecfg.tol = flag_double(flags, "--tol", ecfg.tol);
  ecfg.laplace_alpha = flag_double(flags, "--alpha", ecfg.laplace_alpha);
  ecfg.reg_sign = flag_double(flags, "--reg-sign", ecfg.reg_sign);
  const int width = flag_int(flags, "--width", 8);
  const std::string name = optional_flag(flags, "--name").value_or("demotif");

  const MotifResult motif = extract_motif(ck.params, ck.config, ecfg);
  const Window window = best_window(motif, width);
  if (const auto out = optional_flag(flags, "--out-meme")) {
    write_text_file(*out, emit_meme(window.pwm, name));
  }
  if (const auto out = optional_flag(flags, "--out-svg")) {
    emit_logo_svg(window.pwm, *out);
  }
  if (const auto out = optional_flag(flags, "--out-pfm")) {
    write_text_file(*out, emit_jaspar(window.pwm, name));
  }
  std::printf("best_offset=%d\n", window.offset);
  std::printf("consensus=%s\n", window.pwm.consensus().c_str());
  std::printf("iterations=%zu\n", motif.objective_trace.size());
  return 0;
}

int cmd_logo(const std::vector<std::string>& args) {
  const Flags flags = parse_flags(args, 1, {"--pwm", "--out"});
  if (flags.help) {
    std::cout << "usage: demotif logo --pwm MOTIF_FILE --out SVG_FILE\n";
    return 0;
  }
  const Pwm pwm = load_pwm_file(require(flags, "--pwm"));
  emit_logo_svg(pwm, require(flags, "--out"));
  return 0;
}

int cmd_score(const std::vector<std::string>& args) {
  const Flags flags =
      parse_flags(args, 1, {"--meme-a", "--meme-b", "--data", "--report"});
  if (flags.help) {
    std::cout << "usage: demotif score --meme-a FILE --meme-b FILE --data FILE "
                 "--report FILE\n";
    return 0;
  }
  const Pwm a = load_pwm_file(require(flags, "--meme-a"));
  const Pwm b = load_pwm_file(require(flags, "--meme-b"));
  const Dataset ds = parse_dataset(require(flags, "--data"));
  const auto report_path = require(flags, "--report");
  const AffinityReport report = compare_on_sequences(a, b, ds.sequences);

  std::ofstream out(report_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report: " + report_path);
  char line[256];
  for (size_t i = 0; i < ds.sequences.size(); ++i) {
    const char* winner = report.winner[i] > 0 ? "a" : report.winner[i] < 0 ? "b" : "tie";
    std::snprintf(line, sizeof(line), "%s\t%.6g\t%.6g\t%s\n",
                  ds.sequences[i].id.c_str(), report.scores_a[i],
                  report.scores_b[i], winner);
    out << line;
  }
  if (!out) throw std::runtime_error("report write failed: " + report_path);
  std::printf("a_wins=%d b_wins=%d ties=%d\n", report.a_wins, report.b_wins,
              report.ties);
  return 0;
}

int cmd_run(const std::vector<std::string>& args) {
  const Flags flags =
      parse_flags(args, 1, {"--config", "--set", "--seed", "--out-dir"});
  if (flags.help) {
    std::cout << "usage: demotif run --config FILE [--set key=value]... "
                 "[--seed N] [--out-dir DIR]\n";
    return 0;
  }
  if (!optional_flag(flags, "--config")) throw UsageError("missing --config");
  RunConfig cfg = load_run_config(flags);
  const PipelineResult result = end_to_end(cfg);
  std::cout << read_text_file(result.out_dir / "summary.json");
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  try {
    if (args.empty()) {
      std::cerr << kUsage;
      return 1;
    }
    const std::string& cmd = args[0];
    if (cmd == "--help" || cmd == "-h" || cmd == "help") {
      std::cout << kUsage;
      return 0;
    }
    if (cmd == "--version") {
      std::cout << kVersion << "\n";
      return 0;
    }
    if (cmd == "gen-data") return cmd_gen_data(args);
    if (cmd == "train") return cmd_train(args);
    if (cmd == "eval") return cmd_eval(args);
    if (cmd == "motif") return cmd_motif(args);
    if (cmd == "logo") return cmd_logo(args);
    if (cmd == "score") return cmd_score(args);
    if (cmd == "run") return cmd_run(args);
    throw UsageError("unknown subcommand '" + cmd + "'");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << kUsage;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace demotif::cli
