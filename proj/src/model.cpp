#include "mlrank/model.hpp"

#include <algorithm>
#include <cmath>

#include "mlrank/errors.hpp"
#include "mlrank/kernels.hpp"
#include "mlrank/rng.hpp"

namespace mlrank {

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::gmlr: return "gmlr";
    case Method::crpc: return "crpc";
    case Method::lsep: return "lsep";
  }
  return "gmlr";
}

Method method_from_string(const std::string& name) {
  if (name == "gmlr") return Method::gmlr;
  if (name == "crpc") return Method::crpc;
  if (name == "lsep") return Method::lsep;
  throw DataError("unknown method '" + name + "' (expected gmlr, crpc or lsep)");
}

std::size_t head_width(Method m, std::size_t num_classes) noexcept {
  switch (m) {
    case Method::gmlr: return 2 * num_classes;
    case Method::crpc: return PairwiseLogits::width_for(num_classes);
    case Method::lsep: return 2 * num_classes;
  }
  return 0;
}

std::size_t ModelParams::output_width() const noexcept {
  std::size_t w = 0;
  for (const auto& h : heads) w += h.out;
  return w;
}

std::size_t ModelParams::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : trunk) n += l.weight.size() + l.bias.size();
  for (const auto& l : heads) n += l.weight.size() + l.bias.size();
  return n;
}

std::vector<std::size_t> ModelParams::hidden_sizes() const {
  std::vector<std::size_t> h;
  for (const auto& l : trunk) h.push_back(l.out);
  return h;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  for (auto block : z.blocks()) std::fill(block.begin(), block.end(), 0.0);
  return z;
}

double ModelParams::norm() const {
  double s = 0.0;
  for (auto block : blocks()) {
    for (double v : block) s += v * v;
  }
  return std::sqrt(s);
}

std::vector<std::span<double>> ModelParams::blocks() {
  std::vector<std::span<double>> out;
  for (auto* group : {&trunk, &heads}) {
    for (auto& l : *group) {
      out.emplace_back(l.weight);
      out.emplace_back(l.bias);
    }
  }
  return out;
}

std::vector<std::span<const double>> ModelParams::blocks() const {
  std::vector<std::span<const double>> out;
  for (const auto* group : {&trunk, &heads}) {
    for (const auto& l : *group) {
      out.emplace_back(l.weight);
      out.emplace_back(l.bias);
    }
  }
  return out;
}

ModelParams init_model(Method method, std::size_t num_classes, std::size_t input_dim,
                       const std::vector<std::size_t>& hidden, std::uint64_t seed) {
  if (num_classes == 0 || input_dim == 0) throw DimensionError("init model: zero-sized model");
  ModelParams p;
  p.method = method;
  p.num_classes = num_classes;
  p.input_dim = input_dim;
  Rng rng(derive_seed(seed, "init"));
  auto make = [&](std::size_t in, std::size_t out) {
    DenseLayer l(in, out);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    for (auto& w : l.weight) w = rng.uniform(-bound, bound);
    return l;
  };
  std::size_t width = input_dim;
  for (std::size_t h : hidden) {
    if (h == 0) throw DimensionError("init model: zero-width hidden layer");
    p.trunk.push_back(make(width, h));
    width = h;
  }
  if (method == Method::lsep) {
    p.heads.push_back(make(width, num_classes));
    p.heads.push_back(make(width, num_classes));
  } else {
    p.heads.push_back(make(width, head_width(method, num_classes)));
  }
  return p;
}

namespace {

void affine(const DenseLayer& l, std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < l.out; ++r) y[r] = l.bias[r] + kernels::dot(l.row(r), x);
}

// Indices of nonzero inputs, or empty when the input is too dense to benefit.
std::vector<std::size_t> sparse_support(std::span<const double> x) {
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) nz.push_back(i);
  }
  if (nz.size() * 4 >= x.size()) nz.clear();
  return nz;
}

void affine_sparse(const DenseLayer& l, std::span<const double> x, const std::vector<std::size_t>& nz,
                   std::span<double> y) {
  for (std::size_t r = 0; r < l.out; ++r) {
    const std::span<const double> w = l.row(r);
    double acc = 0.0;
    for (const std::size_t i : nz) acc += w[i] * x[i];
    y[r] = l.bias[r] + acc;
  }
}

bool in_scope(const ModelParams& p, std::size_t block, ParamScope scope) {
  if (scope == ParamScope::all) return true;
  // the threshold head is the last head of an LSEP model
  const std::size_t first = 2 * (p.trunk.size() + p.heads.size() - 1);
  return p.method == Method::lsep && block >= first;
}

}  // namespace

ForwardCache forward_cached(const ModelParams& params, std::span<const double> features) {
  require_same_size(features.size(), params.input_dim, "forward");
  ForwardCache cache;
  cache.activations.reserve(params.trunk.size() + 1);
  cache.activations.emplace_back(features.begin(), features.end());
  for (std::size_t li = 0; li < params.trunk.size(); ++li) {
    const DenseLayer& layer = params.trunk[li];
    std::vector<double> next(layer.out);
    const std::vector<std::size_t> nz = li == 0 ? sparse_support(features) : std::vector<std::size_t>{};
    if (nz.empty()) {
      affine(layer, cache.activations.back(), next);
    } else {
      affine_sparse(layer, features, nz, next);
    }
    for (auto& v : next) v = std::max(v, 0.0);
    cache.activations.push_back(std::move(next));
  }
  cache.output.resize(params.output_width());
  std::size_t offset = 0;
  for (const auto& head : params.heads) {
    affine(head, cache.activations.back(), std::span<double>(cache.output).subspan(offset, head.out));
    offset += head.out;
  }
  return cache;
}

std::vector<double> forward(const ModelParams& params, std::span<const double> features) {
  return forward_cached(params, features).output;
}

GaussianPrediction as_gaussian(const ModelParams& params, std::span<const double> output) {
  const std::size_t k = params.num_classes;
  require_same_size(output.size(), 2 * k, "gaussian head");
  return {std::vector<double>(output.begin(), output.begin() + static_cast<std::ptrdiff_t>(k)),
          std::vector<double>(output.begin() + static_cast<std::ptrdiff_t>(k), output.end())};
}

PairwiseLogits as_pairwise(const ModelParams& params, std::span<const double> output) {
  return PairwiseLogits(params.num_classes, std::vector<double>(output.begin(), output.end()));
}

ScoreThresholdHeads as_heads(const ModelParams& params, std::span<const double> output) {
  const std::size_t k = params.num_classes;
  require_same_size(output.size(), 2 * k, "score/threshold heads");
  return {std::vector<double>(output.begin(), output.begin() + static_cast<std::ptrdiff_t>(k)),
          std::vector<double>(output.begin() + static_cast<std::ptrdiff_t>(k), output.end())};
}

void backward(const ModelParams& params, const ForwardCache& cache, std::span<const double> grad_output,
              ModelParams& grads, ParamScope scope, double scale) {
  require_same_size(grad_output.size(), params.output_width(), "backward");
  require_same_size(cache.activations.size(), params.trunk.size() + 1, "backward");
  const std::vector<double>& top = cache.activations.back();
  const bool full = scope == ParamScope::all;
  std::vector<double> delta_top(full ? top.size() : 0, 0.0);

  std::size_t offset = 0;
  for (std::size_t h = 0; h < params.heads.size(); ++h) {
    const DenseLayer& head = params.heads[h];
    const bool train_head = full || (params.method == Method::lsep && h + 1 == params.heads.size());
    DenseLayer& g = grads.heads[h];
    for (std::size_t r = 0; r < head.out; ++r) {
      const double go = scale * grad_output[offset + r];
      if (go == 0.0) continue;
      if (train_head) {
        g.bias[r] += go;
        kernels::axpy(go, top, std::span<double>(g.weight).subspan(r * head.in, head.in));
      }
      if (full) kernels::axpy(go, head.row(r), delta_top);
    }
    offset += head.out;
  }
  if (!full) return;

  std::vector<double> delta = std::move(delta_top);
  for (std::size_t li = params.trunk.size(); li-- > 0;) {
    const DenseLayer& layer = params.trunk[li];
    const std::vector<double>& out = cache.activations[li + 1];
    const std::vector<double>& in = cache.activations[li];
    for (std::size_t r = 0; r < layer.out; ++r) {
      if (out[r] <= 0.0) delta[r] = 0.0;
    }
    DenseLayer& g = grads.trunk[li];
    std::vector<double> below(li > 0 ? layer.in : 0, 0.0);
    const std::vector<std::size_t> nz = li == 0 ? sparse_support(in) : std::vector<std::size_t>{};
    for (std::size_t r = 0; r < layer.out; ++r) {
      if (delta[r] == 0.0) continue;
      g.bias[r] += delta[r];
      const std::span<double> gw = std::span<double>(g.weight).subspan(r * layer.in, layer.in);
      if (nz.empty()) {
        kernels::axpy(delta[r], in, gw);
      } else {
        for (const std::size_t i : nz) gw[i] += delta[r] * in[i];
      }
      if (li > 0) kernels::axpy(delta[r], layer.row(r), below);
    }
    delta = std::move(below);
  }
}

HeadLoss head_loss(const ModelParams& params, std::span<const double> output, std::span<const Rank> ranks,
                   Supervision mode, Stage stage) {
  require_same_size(ranks.size(), params.num_classes, "head loss");
  const std::size_t k = params.num_classes;
  HeadLoss out;
  switch (params.method) {
    case Method::gmlr: {
      const LossValue lv = gmlr_objective(as_gaussian(params, output), ranks, mode);
      out.value = lv.total;
      out.grad = lv.grad_mu;
      out.grad.insert(out.grad.end(), lv.grad_log_var.begin(), lv.grad_log_var.end());
      break;
    }
    case Method::crpc: {
      PairwiseLoss pl = crpc_loss(as_pairwise(params, output), ranks, mode);
      out.value = pl.value;
      out.grad = std::move(pl.grad);
      break;
    }
    case Method::lsep: {
      const ScoreThresholdHeads heads = as_heads(params, output);
      const HeadsLoss hl =
          stage == Stage::ranking ? lsep_rank_loss(heads, ranks, mode) : lsep_class_loss(heads, ranks);
      out.value = hl.value;
      out.grad.resize(2 * k);
      std::copy(hl.grad_scores.begin(), hl.grad_scores.end(), out.grad.begin());
      std::copy(hl.grad_thresholds.begin(), hl.grad_thresholds.end(),
                out.grad.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
  }
  return out;
}

Prediction predict(const ModelParams& params, std::span<const double> features) {
  const std::vector<double> out = forward(params, features);
  switch (params.method) {
    case Method::gmlr: return predict_gmlr(as_gaussian(params, out));
    case Method::crpc: return predict_crpc(as_pairwise(params, out));
    case Method::lsep: return predict_lsep(as_heads(params, out));
  }
  return {};
}

AdamState AdamState::zeros_for(const ModelParams& params) {
  AdamState s;
  for (auto block : params.blocks()) {
    s.m.emplace_back(block.size(), 0.0);
    s.v.emplace_back(block.size(), 0.0);
  }
  return s;
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, const AdamConfig& cfg,
               ParamScope scope) {
  auto p_blocks = params.blocks();
  const auto g_blocks = grads.blocks();
  require_same_size(p_blocks.size(), g_blocks.size(), "adam step");
  require_same_size(p_blocks.size(), state.m.size(), "adam step");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    if (!in_scope(params, b, scope)) continue;
    auto p = p_blocks[b];
    const auto g = g_blocks[b];
    auto& m = state.m[b];
    auto& v = state.v[b];
    require_same_size(p.size(), g.size(), "adam step");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i] + cfg.weight_decay * p[i];
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * gi;
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * gi * gi;
      p[i] -= cfg.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg.epsilon);
    }
  }
}

}  // namespace mlrank
