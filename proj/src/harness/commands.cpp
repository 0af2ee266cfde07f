#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include "mlrank/checkpoint.hpp"
#include "mlrank/dataset_io.hpp"
#include "mlrank/harness.hpp"
#include "mlrank/metrics.hpp"

namespace mlrank::harness {

namespace fs = std::filesystem;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::vector<std::size_t> equidistant_positions(std::size_t n, std::size_t m) {
  if (m == 0) throw DataError("need at least one checkpoint");
  if (n < m) throw DataError("fewer instances than checkpoints");
  if (m == 1) return {0};
  std::vector<std::size_t> pos(m);
  for (std::size_t i = 0; i < m; ++i) pos[i] = i * (n - 1) / (m - 1);
  return pos;
}

namespace {

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) throw DataError("cannot write " + path.string());
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    if (!out_) throw DataError("CSV write failed");
  }

 private:
  std::ofstream out_;
};

void prepare(const RunOptions& opts, const json& resolved) {
  fs::create_directories(opts.out);
  std::ofstream echo(opts.out / "config.resolved.json", std::ios::binary);
  if (!echo) throw DataError("cannot write " + (opts.out / "config.resolved.json").string());
  echo << resolved.dump(2) << '\n';
}

void warn(const RunOptions& opts, const std::string& msg) {
  if (opts.warnings) *opts.warnings << "warning: " << msg << '\n';
}

std::string path_of(const json& cfg, const char* key) {
  if (!cfg.contains(key) || !cfg[key].is_string()) throw UsageError(std::string("missing \"") + key + "\" path");
  return cfg[key].get<std::string>();
}

// Scoring configuration for the canvas experiments: the checkpoint's data
// echo overlaid with the command's generator section.
CanvasConfig experiment_canvas(const RunOptions& opts, const Checkpoint& ckpt, const char* split, json& used) {
  json base = json::object();
  if (ckpt.generator.value("kind", std::string{}) == "canvas") base = ckpt.generator;
  if (!base.empty()) {
    base.erase("n");
    base.erase("image_dump");
  }
  const json overlay = opts.config.value("generator", json::object());
  for (const auto& [k, v] : overlay.items()) base[k] = v;
  CanvasConfig cfg = canvas_config_from_json(base);
  cfg.seed = opts.config.at("seed").get<std::uint64_t>();
  cfg.split = split;
  cfg.validate();
  if (cfg.feature_size() != ckpt.params.input_dim) {
    throw DimensionError("checkpoint input size " + std::to_string(ckpt.params.input_dim) +
                         " does not match the canvas feature size " + std::to_string(cfg.feature_size()));
  }
  const std::string trained_setup = ckpt.generator.value("setup", std::string{});
  if (!trained_setup.empty() && trained_setup != to_string(cfg.setup)) {
    warn(opts, "setup mismatch: checkpoint trained on " + trained_setup + ", experiment uses " +
                   to_string(cfg.setup));
  }
  used = to_json(cfg);
  return cfg;
}

}  // namespace

void cmd_generate(const RunOptions& opts) {
  const json& g = opts.config.at("generator");
  const std::size_t n = g.at("n").get<std::size_t>();
  prepare(opts, opts.config);
  Dataset data;
  if (g.at("kind") == "features") {
    const FeatureConfig cfg = feature_config_from_json(g);
    data.num_classes = cfg.num_classes;
    data.feature_dim = cfg.dims;
    data.generator = g;
    data.instances = generate_feature_dataset(cfg, n);
  } else {
    const CanvasConfig cfg = canvas_config_from_json(g);
    const auto samples = generate_canvas_dataset(cfg, n);
    data = to_dataset(samples, cfg, g);
    if (g.value("image_dump", false)) write_image_dump(samples, cfg, opts.out / "images");
  }
  write_jsonl(data, opts.out / "dataset.jsonl");
}

void cmd_train(const RunOptions& opts) {
  const TrainConfig cfg = train_config_from_json(opts.config.at("train"));
  const Dataset data = read_jsonl(path_of(opts.config, "dataset"));
  if (data.instances.empty()) throw DataError("dataset has no instances");
  prepare(opts, opts.config);
  const TrainResult result = train(data.instances, cfg);
  save_checkpoint({result.params, cfg.mode, data.generator, to_json(cfg)}, opts.out / "model.json");
  CsvWriter log(opts.out / "train_log.csv", {"stage", "epoch", "loss", "learning_rate"});
  for (const auto& r : result.log) {
    log.row({r.stage == Stage::ranking ? "ranking" : "classification", std::to_string(r.epoch),
             format_number(r.loss), format_number(r.learning_rate)});
  }
}

void cmd_eval(const RunOptions& opts) {
  const Checkpoint ckpt = load_checkpoint(path_of(opts.config, "checkpoint"));
  const Dataset data = read_jsonl(path_of(opts.config, "dataset"));
  if (data.num_classes != ckpt.params.num_classes) {
    throw DataError("class-count mismatch: checkpoint has " + std::to_string(ckpt.params.num_classes) +
                    ", dataset has " + std::to_string(data.num_classes));
  }
  if (data.feature_dim != ckpt.params.input_dim) throw DimensionError("feature length mismatch");
  prepare(opts, opts.config);
  std::vector<Prediction> preds;
  std::vector<RankVector> truth;
  for (const auto& x : data.instances) {
    preds.push_back(predict(ckpt.params, x.features));
    truth.push_back(x.ranks);
  }
  const MetricReport r = evaluate_dataset(preds, truth);
  const double s = opts.raw ? 1.0 : 100.0;
  CsvWriter csv(opts.out / "metrics.csv", {"tau_b", "s_rho", "gamma", "hl", "m1", "f1", "n_instances",
                                           "skipped_tau_b", "skipped_s_rho", "skipped_gamma", "skipped_m1"});
  csv.row({format_number(s * r.tau_b), format_number(s * r.spearman_rho), format_number(s * r.gamma),
           format_number(s * r.hamming_loss), format_number(s * r.max1), format_number(s * r.f1),
           std::to_string(r.n_instances), std::to_string(r.skipped_tau_b), std::to_string(r.skipped_spearman_rho),
           std::to_string(r.skipped_gamma), std::to_string(r.skipped_max1)});
}

void cmd_adjust_experiment(const RunOptions& opts) {
  const Checkpoint ckpt = load_checkpoint(path_of(opts.config, "checkpoint"));
  json resolved = opts.config;
  const CanvasConfig cfg = experiment_canvas(opts, ckpt, "adjust", resolved["generator"]);
  const std::size_t n_seq = opts.config.at("n_sequences").get<std::size_t>();
  const std::size_t steps = opts.config.at("steps").get<std::size_t>();
  prepare(opts, resolved);
  const auto seqs = generate_adjust_sequences(cfg, n_seq, steps);
  std::vector<std::array<double, 3>> sums(steps, {0.0, 0.0, 0.0});
  for (const auto& seq : seqs) {
    for (std::size_t t = 0; t < seq.size(); ++t) {
      const Prediction p = predict(ckpt.params, seq[t].pixels);
      for (std::size_t role = 0; role < 3; ++role) sums[t][role] += p.scores[seq[t].digits[role].digit];
    }
  }
  CsvWriter csv(opts.out / "adjust.csv",
                {"step", "mean_score_low_digit", "mean_score_middle_digit", "mean_score_high_digit"});
  const double inv = 1.0 / static_cast<double>(n_seq);
  for (std::size_t t = 0; t < steps; ++t) {
    csv.row({std::to_string(t), format_number(sums[t][0] * inv), format_number(sums[t][1] * inv),
             format_number(sums[t][2] * inv)});
  }
}

void cmd_calibration_experiment(const RunOptions& opts) {
  const Checkpoint ckpt = load_checkpoint(path_of(opts.config, "checkpoint"));
  json resolved = opts.config;
  const CanvasConfig cfg = experiment_canvas(opts, ckpt, "calibration", resolved["generator"]);
  if (!ranks_by_scale(cfg.setup)) throw DataError("setup mismatch: calibration needs a scale-ranked setup");
  const std::size_t n = opts.config.at("n_samples").get<std::size_t>();
  prepare(opts, resolved);
  const auto samples = generate_calibration_set(cfg, n);
  constexpr std::size_t kLevels = std::size(kCalibrationLevels);
  std::array<std::vector<double>, kLevels> scores;
  std::array<std::vector<double>, kLevels> sigmas;
  for (const auto& s : samples) {
    const std::vector<double> out = forward(ckpt.params, s.pixels);
    const Prediction p = predict(ckpt.params, s.pixels);
    for (const auto& d : s.digits) {
      const auto level = static_cast<std::size_t>(
          std::find(std::begin(kCalibrationLevels), std::end(kCalibrationLevels), d.scale) -
          std::begin(kCalibrationLevels));
      if (level >= kLevels) throw DataError("calibration sample carries an unknown level");
      scores[level].push_back(p.scores[d.digit]);
      if (ckpt.params.method == Method::gmlr) sigmas[level].push_back(as_gaussian(ckpt.params, out).sigma(d.digit));
    }
  }
  CsvWriter csv(opts.out / "calibration.csv", {"level", "mean", "std", "mean_pred_sigma"});
  for (std::size_t l = 0; l < kLevels; ++l) {
    const auto& v = scores[l];
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : std::nan("");
    const double sig = sigmas[l].empty() ? std::nan("")
                                         : std::accumulate(sigmas[l].begin(), sigmas[l].end(), 0.0) /
                                               static_cast<double>(sigmas[l].size());
    csv.row({format_number(kCalibrationLevels[l]), format_number(mean), format_number(sd), format_number(sig)});
  }
}

void cmd_extract_significance(const RunOptions& opts) {
  const Checkpoint ckpt = load_checkpoint(path_of(opts.config, "checkpoint"));
  const Dataset data = read_jsonl(path_of(opts.config, "dataset"));
  const std::size_t cls = opts.config.at("class").get<std::size_t>();
  const std::size_t m = opts.config.at("n_checkpoints").get<std::size_t>();
  if (cls >= ckpt.params.num_classes) throw DataError("class index " + std::to_string(cls) + " out of range");
  if (data.feature_dim != ckpt.params.input_dim) throw DimensionError("feature length mismatch");
  const auto positions = equidistant_positions(data.instances.size(), m);
  prepare(opts, opts.config);
  std::vector<double> score(data.instances.size());
  for (std::size_t i = 0; i < score.size(); ++i) score[i] = predict(ckpt.params, data.instances[i].features).scores[cls];
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  CsvWriter csv(opts.out / "extract.csv", {"checkpoint", "position", "instance", "score"});
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const std::size_t idx = order[positions[i]];
    csv.row({std::to_string(i), std::to_string(positions[i]), std::to_string(idx), format_number(score[idx])});
  }
}

}  // namespace mlrank::harness
