#include "mlrank/checkpoint.hpp"

#include <cmath>
#include <fstream>

#include "mlrank/errors.hpp"

namespace mlrank {

using nlohmann::json;

namespace {

json layer_to_json(const DenseLayer& l) {
  return {{"in", l.in}, {"out", l.out}, {"weight", l.weight}, {"bias", l.bias}};
}

DenseLayer layer_from_json(const json& j) {
  DenseLayer l(j.at("in").get<std::size_t>(), j.at("out").get<std::size_t>());
  l.weight = j.at("weight").get<std::vector<double>>();
  l.bias = j.at("bias").get<std::vector<double>>();
  if (l.weight.size() != l.in * l.out || l.bias.size() != l.out) {
    throw DataError("checkpoint: layer arrays do not match their declared shape");
  }
  for (double v : l.weight) {
    if (!std::isfinite(v)) throw DataError("checkpoint: non-finite weight");
  }
  for (double v : l.bias) {
    if (!std::isfinite(v)) throw DataError("checkpoint: non-finite bias");
  }
  return l;
}

void validate_shapes(const ModelParams& p) {
  std::size_t width = p.input_dim;
  for (const auto& l : p.trunk) {
    if (l.in != width) throw DataError("checkpoint: trunk layer dimensions are not compatible");
    width = l.out;
  }
  const std::size_t expected_heads = p.method == Method::lsep ? 2 : 1;
  if (p.heads.size() != expected_heads) throw DataError("checkpoint: wrong number of heads for method");
  for (const auto& h : p.heads) {
    if (h.in != width) throw DataError("checkpoint: head input does not match the trunk output");
  }
  if (p.output_width() != head_width(p.method, p.num_classes)) {
    throw DataError("checkpoint: head width does not match method and class count");
  }
}

}  // namespace

json checkpoint_to_json(const Checkpoint& ckpt) {
  const ModelParams& p = ckpt.params;
  json trunk = json::array();
  for (const auto& l : p.trunk) trunk.push_back(layer_to_json(l));
  json heads = json::array();
  for (const auto& l : p.heads) heads.push_back(layer_to_json(l));
  return {{"format", kCheckpointFormat},
          {"version", kCheckpointVersion},
          {"method", to_string(p.method)},
          {"mode", to_string(ckpt.mode)},
          {"num_classes", p.num_classes},
          {"input_dim", p.input_dim},
          {"hidden", p.hidden_sizes()},
          {"trunk", trunk},
          {"heads", heads},
          {"generator", ckpt.generator},
          {"train", ckpt.train}};
}

Checkpoint checkpoint_from_json(const json& j) {
  try {
    if (j.value("format", std::string{}) != kCheckpointFormat) throw DataError("checkpoint: unknown format");
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw DataError("checkpoint: unsupported version " + std::to_string(version));
    }
    Checkpoint c;
    c.params.method = method_from_string(j.at("method").get<std::string>());
    c.mode = supervision_from_string(j.at("mode").get<std::string>());
    c.params.num_classes = j.at("num_classes").get<std::size_t>();
    c.params.input_dim = j.at("input_dim").get<std::size_t>();
    for (const auto& l : j.at("trunk")) c.params.trunk.push_back(layer_from_json(l));
    for (const auto& l : j.at("heads")) c.params.heads.push_back(layer_from_json(l));
    validate_shapes(c.params);
    c.generator = j.value("generator", json::object());
    c.train = j.value("train", json::object());
    return c;
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << checkpoint_to_json(ckpt).dump() << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace mlrank
