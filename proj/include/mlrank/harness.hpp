#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "mlrank/errors.hpp"
#include "mlrank/synthgen.hpp"
#include "mlrank/train.hpp"

namespace mlrank::harness {

/// Bad invocation: missing seed, unknown key, missing input path.
class UsageError : public Error {
 public:
  using Error::Error;
};

using nlohmann::json;

// Config sections. from_json fills defaults for absent keys and rejects
// unknown ones; to_json writes every field.
CanvasConfig canvas_config_from_json(const json& j);
json to_json(const CanvasConfig& cfg);
FeatureConfig feature_config_from_json(const json& j);
json to_json(const FeatureConfig& cfg);
TrainConfig train_config_from_json(const json& j);
json to_json(const TrainConfig& cfg);

/// Commands with random draws require a seed from the config or the flag;
/// the flag wins.
json resolve_config(const std::string& command, json config, std::optional<std::uint64_t> seed_flag);

struct RunOptions {
  json config = json::object();  // already resolved
  std::filesystem::path out;
  bool raw = false;  // metric columns in [0, 1] instead of percentages
  std::ostream* warnings = nullptr;
};

// Every command writes config.resolved.json into `out` next to its outputs.
void cmd_generate(const RunOptions& opts);        // dataset.jsonl [+ images/]
void cmd_train(const RunOptions& opts);           // model.json, train_log.csv
void cmd_eval(const RunOptions& opts);            // metrics.csv
void cmd_adjust_experiment(const RunOptions& opts);       // adjust.csv
void cmd_calibration_experiment(const RunOptions& opts);  // calibration.csv
void cmd_extract_significance(const RunOptions& opts);    // extract.csv

/// Sorted positions floor(i * (n - 1) / (m - 1)) for i in [0, m); {0} when m == 1.
std::vector<std::size_t> equidistant_positions(std::size_t n, std::size_t m);

/// Shortest round-trip text for a double; "nan" for NaN.
std::string format_number(double v);

}  // namespace mlrank::harness
