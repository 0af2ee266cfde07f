// mlrank: dataset generation, training, evaluation and the behavioral
// experiments. Exit codes: 0 ok, 1 usage, 2 data, 3 numeric abort.
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlrank/harness.hpp"

namespace {

using mlrank::harness::json;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  bool raw = false;
  std::string dataset;
  std::string checkpoint;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw mlrank::harness::UsageError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw mlrank::harness::UsageError(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  namespace h = mlrank::harness;
  CLI::App app{"Multi-label ranking toolkit"};
  app.require_subcommand(1);

  const std::map<std::string, std::pair<std::string, std::function<void(const h::RunOptions&)>>> verbs = {
      {"generate", {"Generate a synthetic dataset", h::cmd_generate}},
      {"train", {"Train a model on a dataset", h::cmd_train}},
      {"eval", {"Evaluate a checkpoint on a dataset", h::cmd_eval}},
      {"adjust-exp", {"Sweep two digits' significance and record scores", h::cmd_adjust_experiment}},
      {"calib-exp", {"Fit score distributions per significance level", h::cmd_calibration_experiment}},
      {"extract-sig", {"Pick equidistant instances along one class's scores", h::cmd_extract_significance}},
  };

  Flags flags;
  for (const auto& [name, verb] : verbs) {
    CLI::App* sub = app.add_subcommand(name, verb.first);
    sub->add_option("--config", flags.config, "JSON config file");
    sub->add_option("--seed", flags.seed, "Seed; overrides the config");
    sub->add_option("--out", flags.out, "Output directory")->capture_default_str();
    sub->add_flag("--raw", flags.raw, "Metrics in [0, 1] instead of percentages");
    if (name != "generate") sub->add_option("--dataset", flags.dataset, "Dataset JSONL; overrides the config");
    if (name != "generate" && name != "train") {
      sub->add_option("--checkpoint", flags.checkpoint, "Model checkpoint; overrides the config");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    json config = load_config(flags.config);
    if (!config.is_object()) throw h::UsageError("config must be a JSON object");
    if (!flags.dataset.empty()) config["dataset"] = flags.dataset;
    if (!flags.checkpoint.empty()) config["checkpoint"] = flags.checkpoint;
    h::RunOptions opts;
    opts.config = h::resolve_config(command, std::move(config), flags.seed);
    opts.out = flags.out;
    opts.raw = flags.raw;
    opts.warnings = &std::cerr;
    verbs.at(command).second(opts);
  } catch (const h::UsageError& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return kUsage;
  } catch (const mlrank::NumericError& e) {
    std::cerr << command << ": numeric abort: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
