#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "mlrank/model.hpp"

namespace mlrank {

inline constexpr const char* kCheckpointFormat = "mlrank-model";
inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  ModelParams params;
  Supervision mode = Supervision::strong;
  nlohmann::json generator = nlohmann::json::object();  // data generator echo
  nlohmann::json train = nlohmann::json::object();      // train config echo
};

nlohmann::json checkpoint_to_json(const Checkpoint& ckpt);
/// Throws DataError on a wrong format, version or inconsistent shapes.
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace mlrank
