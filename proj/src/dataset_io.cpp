#include "mlrank/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "mlrank/errors.hpp"

namespace mlrank {

using nlohmann::json;

void write_jsonl(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << json{{"k", data.num_classes}, {"d", data.feature_dim}, {"generator", data.generator}}.dump() << '\n';
  for (const auto& x : data.instances) {
    require_same_size(x.features.size(), data.feature_dim, "dataset features");
    require_same_size(x.ranks.size(), data.num_classes, "dataset ranks");
    out << json{{"features", x.features}, {"ranks", x.ranks}}.dump() << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

Dataset read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto where = [&] { return path.string() + ":" + std::to_string(line_no) + ": "; };
    try {
      const json j = json::parse(line);
      if (!have_header) {
        data.num_classes = j.at("k").get<std::size_t>();
        data.feature_dim = j.at("d").get<std::size_t>();
        data.generator = j.value("generator", json::object());
        if (data.num_classes == 0) throw DataError(where() + "class count must be positive");
        have_header = true;
        continue;
      }
      RankedInstance x;
      x.features = j.at("features").get<std::vector<double>>();
      for (const auto& r : j.at("ranks")) {
        if (!r.is_number_integer() || r.get<long long>() < 0) {
          throw DataError(where() + "ranks must be non-negative integers");
        }
        x.ranks.push_back(r.get<Rank>());
      }
      if (x.features.size() != data.feature_dim) throw DataError(where() + "feature length differs from header");
      if (x.ranks.size() != data.num_classes) throw DataError(where() + "rank length differs from header");
      data.instances.push_back(std::move(x));
    } catch (const json::exception& e) {
      throw DataError(where() + e.what());
    }
  }
  if (!have_header) throw DataError(path.string() + ": missing header line");
  return data;
}

Dataset to_dataset(const std::vector<GeneratedSample>& samples, const CanvasConfig& cfg, json generator) {
  Dataset d;
  d.num_classes = CanvasConfig::kNumClasses;
  d.feature_dim = cfg.feature_size();
  d.generator = std::move(generator);
  d.instances.reserve(samples.size());
  for (const auto& s : samples) d.instances.push_back(s.instance());
  return d;
}

void write_image_dump(const std::vector<GeneratedSample>& samples, const CanvasConfig& cfg,
                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const bool color = cfg.channels() == 3;
  std::ofstream labels(dir / "labels.jsonl", std::ios::binary);
  if (!labels) throw DataError("cannot write " + (dir / "labels.jsonl").string());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.%s", i, color ? "ppm" : "pgm");
    std::ofstream img(dir / name, std::ios::binary);
    if (!img) throw DataError("cannot write " + (dir / name).string());
    img << (color ? "P6" : "P5") << '\n' << cfg.canvas_size << ' ' << cfg.canvas_size << "\n255\n";
    for (double v : samples[i].pixels) {
      const auto byte = static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
      img.put(static_cast<char>(byte));
    }
    json digits = json::array();
    for (const auto& f : samples[i].digits) {
      digits.push_back({{"digit", f.digit},
                        {"scale", f.scale},
                        {"brightness", f.brightness},
                        {"hue", f.hue},
                        {"saturation", f.saturation},
                        {"x", f.x},
                        {"y", f.y}});
    }
    labels << json{{"file", name}, {"ranks", samples[i].ranks}, {"digits", digits}}.dump() << '\n';
  }
}

}  // namespace mlrank
