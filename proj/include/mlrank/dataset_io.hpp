#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"
#include "mlrank/rank_model.hpp"
#include "mlrank/synthgen.hpp"

namespace mlrank {

struct Dataset {
  std::size_t num_classes = 0;
  std::size_t feature_dim = 0;
  nlohmann::json generator = nlohmann::json::object();
  std::vector<RankedInstance> instances;
};

/// Header line {"k","d","generator"} then one {"features","ranks"} object per line.
void write_jsonl(const Dataset& data, const std::filesystem::path& path);
/// Throws DataError with the offending line number on malformed input.
Dataset read_jsonl(const std::filesystem::path& path);

Dataset to_dataset(const std::vector<GeneratedSample>& samples, const CanvasConfig& cfg,
                   nlohmann::json generator);

/// One PGM (gray) or PPM (color) per sample plus labels.jsonl holding the
/// ranks and every digit's factors.
void write_image_dump(const std::vector<GeneratedSample>& samples, const CanvasConfig& cfg,
                      const std::filesystem::path& dir);

}  // namespace mlrank
