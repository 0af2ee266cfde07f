#include <map>
#include <set>

#include "mlrank/harness.hpp"

namespace mlrank::harness {

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& section) {
  if (!j.is_object()) throw UsageError(section + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (allowed.count(key) == 0) throw UsageError(section + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& field, const std::string& section) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(section + ": bad value for '" + key + "'");
  }
}

void read_interval(const json& j, const char* key, Interval& field, const std::string& section) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw UsageError(section + ": '" + key + "' must be [lo, hi]");
  }
  field = {v[0].get<double>(), v[1].get<double>()};
}

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

template <typename Enum, typename Parse>
void read_enum(const json& j, const char* key, Enum& field, Parse parse, const std::string& section) {
  std::string text;
  read(j, key, text, section);
  if (!text.empty()) field = parse(text);
}

}  // namespace

CanvasConfig canvas_config_from_json(const json& j) {
  const std::string s = "generator";
  reject_unknown(j, {"kind", "n", "canvas_size", "glyph_size", "min_digits", "max_digits", "scale_range",
                     "brightness_range", "brightness_floor", "fixed_scale", "fixed_brightness", "color_mode",
                     "setup", "glyph_source", "idx_images", "idx_labels", "seed", "split", "image_dump"},
                 s);
  CanvasConfig c;
  read(j, "canvas_size", c.canvas_size, s);
  read(j, "glyph_size", c.glyph_size, s);
  read(j, "min_digits", c.min_digits, s);
  read(j, "max_digits", c.max_digits, s);
  read_interval(j, "scale_range", c.scale_range, s);
  read_interval(j, "brightness_range", c.brightness_range, s);
  read(j, "brightness_floor", c.brightness_floor, s);
  read(j, "fixed_scale", c.fixed_scale, s);
  read(j, "fixed_brightness", c.fixed_brightness, s);
  read_enum(j, "color_mode", c.color_mode, color_mode_from_string, s);
  read_enum(j, "setup", c.setup, setup_from_string, s);
  std::string source;
  read(j, "glyph_source", source, s);
  if (!source.empty()) {
    if (source == "builtin") {
      c.glyph_source = GlyphSource::builtin;
    } else if (source == "idx") {
      c.glyph_source = GlyphSource::idx_file;
    } else {
      throw UsageError(s + ": glyph_source must be builtin or idx");
    }
  }
  std::string path;
  read(j, "idx_images", path, s);
  c.idx_images = path;
  path.clear();
  read(j, "idx_labels", path, s);
  c.idx_labels = path;
  read(j, "seed", c.seed, s);
  read(j, "split", c.split, s);
  return c;
}

json to_json(const CanvasConfig& c) {
  return {{"kind", "canvas"},
          {"canvas_size", c.canvas_size},
          {"glyph_size", c.glyph_size},
          {"min_digits", c.min_digits},
          {"max_digits", c.max_digits},
          {"scale_range", interval_json(c.scale_range)},
          {"brightness_range", interval_json(c.brightness_range)},
          {"brightness_floor", c.brightness_floor},
          {"fixed_scale", c.fixed_scale},
          {"fixed_brightness", c.fixed_brightness},
          {"color_mode", to_string(c.color_mode)},
          {"setup", to_string(c.setup)},
          {"glyph_source", c.glyph_source == GlyphSource::builtin ? "builtin" : "idx"},
          {"idx_images", c.idx_images.string()},
          {"idx_labels", c.idx_labels.string()},
          {"seed", c.seed},
          {"split", c.split}};
}

FeatureConfig feature_config_from_json(const json& j) {
  const std::string s = "generator";
  reject_unknown(j, {"kind", "n", "num_classes", "dims", "factor_range", "noise", "seed", "split", "encoding"}, s);
  FeatureConfig c;
  read(j, "num_classes", c.num_classes, s);
  read(j, "dims", c.dims, s);
  read_interval(j, "factor_range", c.factor_range, s);
  read(j, "noise", c.noise, s);
  read(j, "seed", c.seed, s);
  read(j, "split", c.split, s);
  read_enum(j, "encoding", c.encoding, feature_encoding_from_string, s);
  return c;
}

json to_json(const FeatureConfig& c) {
  return {{"kind", "features"},
          {"num_classes", c.num_classes},
          {"dims", c.dims},
          {"factor_range", interval_json(c.factor_range)},
          {"noise", c.noise},
          {"seed", c.seed},
          {"split", c.split},
          {"encoding", to_string(c.encoding)}};
}

TrainConfig train_config_from_json(const json& j) {
  const std::string s = "train";
  reject_unknown(j, {"method", "mode", "learning_rate", "weight_decay", "beta1", "beta2", "epsilon", "epochs",
                     "batch_size", "lr_decay", "seed", "hidden", "threshold_epochs", "early_stop", "patience",
                     "tolerance"},
                 s);
  TrainConfig c;
  read_enum(j, "method", c.method, method_from_string, s);
  read_enum(j, "mode", c.mode, supervision_from_string, s);
  read(j, "learning_rate", c.adam.learning_rate, s);
  read(j, "weight_decay", c.adam.weight_decay, s);
  read(j, "beta1", c.adam.beta1, s);
  read(j, "beta2", c.adam.beta2, s);
  read(j, "epsilon", c.adam.epsilon, s);
  read(j, "epochs", c.epochs, s);
  read(j, "batch_size", c.batch_size, s);
  read(j, "lr_decay", c.lr_decay, s);
  read(j, "seed", c.seed, s);
  read(j, "hidden", c.hidden, s);
  read(j, "threshold_epochs", c.threshold_epochs, s);
  read(j, "early_stop", c.early_stop, s);
  read(j, "patience", c.patience, s);
  read(j, "tolerance", c.tolerance, s);
  return c;
}

json to_json(const TrainConfig& c) {
  return {{"method", to_string(c.method)},
          {"mode", to_string(c.mode)},
          {"learning_rate", c.adam.learning_rate},
          {"weight_decay", c.adam.weight_decay},
          {"beta1", c.adam.beta1},
          {"beta2", c.adam.beta2},
          {"epsilon", c.adam.epsilon},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"lr_decay", c.lr_decay},
          {"seed", c.seed},
          {"hidden", c.hidden},
          {"threshold_epochs", c.threshold_epochs},
          {"early_stop", c.early_stop},
          {"patience", c.patience},
          {"tolerance", c.tolerance}};
}

namespace {

const std::set<std::string>& command_keys(const std::string& command) {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"generate", {"seed", "generator"}},
      {"train", {"seed", "dataset", "train"}},
      {"eval", {"seed", "checkpoint", "dataset"}},
      {"adjust-exp", {"seed", "checkpoint", "generator", "n_sequences", "steps"}},
      {"calib-exp", {"seed", "checkpoint", "generator", "n_samples"}},
      {"extract-sig", {"seed", "checkpoint", "dataset", "class", "n_checkpoints"}},
  };
  const auto it = keys.find(command);
  if (it == keys.end()) throw UsageError("unknown command '" + command + "'");
  return it->second;
}

bool needs_seed(const std::string& command) {
  return command == "generate" || command == "train" || command == "adjust-exp" || command == "calib-exp";
}

json resolve_generator(const json& g, std::uint64_t seed) {
  const std::string kind = g.value("kind", std::string("canvas"));
  if (kind == "canvas") {
    CanvasConfig c = canvas_config_from_json(g);
    c.seed = seed;
    c.validate();
    json out = to_json(c);
    out["n"] = g.value("n", std::size_t{1000});
    out["image_dump"] = g.value("image_dump", false);
    return out;
  }
  if (kind == "features") {
    FeatureConfig c = feature_config_from_json(g);
    c.seed = seed;
    c.validate();
    json out = to_json(c);
    out["n"] = g.value("n", std::size_t{1000});
    return out;
  }
  throw UsageError("generator: kind must be canvas or features");
}

}  // namespace

json resolve_config(const std::string& command, json config, std::optional<std::uint64_t> seed_flag) {
  if (config.is_null()) config = json::object();
  if (config.is_object() && config.contains("command")) {
    // a resolved echo may be fed back in unchanged
    if (config["command"] != command) throw UsageError("config was resolved for another command");
    config.erase("command");
  }
  reject_unknown(config, command_keys(command), "config");
  if (seed_flag) config["seed"] = *seed_flag;
  if (needs_seed(command) && !config.contains("seed")) {
    throw UsageError("a seed is required (config \"seed\" or --seed)");
  }
  std::uint64_t seed = 0;
  if (config.contains("seed")) {
    const json& sj = config["seed"];
    if (!sj.is_number_integer() || (!sj.is_number_unsigned() && sj.get<std::int64_t>() < 0)) {
      throw UsageError("config: seed must be a non-negative integer");
    }
    seed = config["seed"].get<std::uint64_t>();
  }
  json out = config;
  out["command"] = command;
  if (command == "generate") {
    out["generator"] = resolve_generator(config.value("generator", json::object()), seed);
  } else if (command == "train") {
    TrainConfig t = train_config_from_json(config.value("train", json::object()));
    t.seed = seed;
    t.validate();
    out["train"] = to_json(t);
  } else if (command == "adjust-exp") {
    out["n_sequences"] = config.value("n_sequences", std::size_t{50});
    out["steps"] = config.value("steps", std::size_t{50});
  } else if (command == "calib-exp") {
    out["n_samples"] = config.value("n_samples", std::size_t{50});
  } else if (command == "extract-sig") {
    out["class"] = config.value("class", std::size_t{0});
    out["n_checkpoints"] = config.value("n_checkpoints", std::size_t{10});
  }
  for (const char* key : {"dataset", "checkpoint"}) {
    if (command_keys(command).count(key) && !out.contains(key)) {
      throw UsageError(std::string("missing \"") + key + "\" path");
    }
  }
  return out;
}

}  // namespace mlrank::harness
