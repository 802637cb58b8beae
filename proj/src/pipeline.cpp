#include "demotif/pipeline.hpp"

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "demotif/checkpoint.hpp"
#include "demotif/logo.hpp"
#include "demotif/rng.hpp"
#include "demotif/score.hpp"

namespace demotif {

namespace {

template <typename F>
auto stage(const char* name, F&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(name) + ": " + e.what());
  }
}

// Derived stream tags so the pipeline stages draw independent seeds.
constexpr uint64_t kTagData = 0xDA7A;
constexpr uint64_t kTagShuffle = 0x5AFE;
constexpr uint64_t kTagSplit = 0x57A7;

}  // namespace

PipelineResult end_to_end(RunConfig cfg) {
  cfg.validate();
  const std::filesystem::path out_dir(cfg.out_dir);
  std::filesystem::create_directories(out_dir);

  // Reference motif the extracted one is scored against.
  Pwm planted;
  bool have_planted = false;
  if (!cfg.planted_pwm_path.empty()) {
    planted = stage("gen-data", [&] { return load_pwm_file(cfg.planted_pwm_path); });
    have_planted = true;
  } else if (cfg.data_path.empty()) {
    planted = consensus_pwm(cfg.planted_consensus);
    have_planted = true;
  }

  Dataset data = stage("gen-data", [&] {
    if (!cfg.data_path.empty()) return parse_dataset(cfg.data_path);
    Dataset ds = generate_synthetic(cfg.n_pos, cfg.n_neg, cfg.model.input_len,
                                    planted, mix_seed(cfg.train.seed, kTagData));
    if (cfg.negatives == "shuffle") {
      std::vector<Sequence> pos(ds.sequences.begin(),
                                ds.sequences.begin() + cfg.n_pos);
      auto negs = shuffle_negatives(pos, mix_seed(cfg.train.seed, kTagShuffle));
      ds.sequences.assign(pos.begin(), pos.end());
      ds.sequences.insert(ds.sequences.end(), negs.begin(), negs.end());
    }
    return ds;
  });
  write_dataset(data, out_dir / "dataset.tsv");
  if (have_planted) {
    write_text_file(out_dir / "planted.meme", emit_meme(planted, "planted"));
  }

  auto [train_set, test_set] = stage("split", [&] {
    return split(data, cfg.train_frac, mix_seed(cfg.train.seed, kTagSplit));
  });
  write_dataset(train_set, out_dir / "train.tsv");
  write_dataset(test_set, out_dir / "test.tsv");

  TrainResult trained = stage("train", [&] {
    auto params = build_model(cfg.model, cfg.train.seed);
    return train(params, cfg.model, cfg.train, train_set, test_set);
  });
  stage("train", [&] {
    save_checkpoint(trained.params, cfg.model, out_dir / "model.ckpt");
    return 0;
  });

  PipelineResult result;
  result.out_dir = out_dir;
  result.auc = stage("eval", [&] {
    std::vector<int> labels;
    for (const auto& s : test_set.sequences) labels.push_back(s.label);
    return auc(predict(trained.params, cfg.model, test_set), labels);
  });

  MotifResult motif = stage("motif", [&] {
    return extract_motif(trained.params, cfg.model, cfg.extract);
  });
  Window window = stage("motif", [&] { return best_window(motif, cfg.motif_width); });
  result.best_offset = window.offset;
  write_text_file(out_dir / "motif.meme", emit_meme(window.pwm, "demotif"));
  write_text_file(out_dir / "motif_full.meme", emit_meme(motif.full_pwm, "demotif_full"));

  stage("logo", [&] {
    emit_logo_svg(window.pwm, out_dir / "motif.svg");
    return 0;
  });

  const Pwm reference = have_planted ? planted : uniform_pwm(cfg.motif_width);
  double win_vs_uniform = 0.0;
  stage("score", [&] {
    result.similarity = motif_similarity(window.pwm, reference).score;
    std::vector<Sequence> positives;
    for (const auto& s : test_set.sequences) {
      if (s.label == 1) positives.push_back(s);
    }
    if (positives.empty()) {
      throw std::runtime_error("no positive test sequences");
    }
    result.win_fraction =
        compare_on_sequences(window.pwm, reference, positives).win_fraction_a();
    win_vs_uniform =
        compare_on_sequences(window.pwm, uniform_pwm(window.width), positives)
            .win_fraction_a();
    return 0;
  });

  nlohmann::json summary{
      {"auc", result.auc},
      {"best_offset", result.best_offset},
      {"best_width", window.width},
      {"similarity", result.similarity},
      {"win_fraction", result.win_fraction},
      {"win_fraction_vs_uniform", win_vs_uniform},
      {"best_val_auc", trained.best_val_auc},
      {"best_epoch", trained.best_epoch},
      {"epochs_trained", trained.history.size()},
      {"window_consensus", window.pwm.consensus()},
  };
  write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");
  return result;
}

}  // namespace demotif
