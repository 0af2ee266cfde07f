#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlrank/baseline_losses.hpp"
#include "mlrank/gmlr_loss.hpp"
#include "mlrank/predictor.hpp"

namespace mlrank {

enum class Method { gmlr, crpc, lsep };

const char* to_string(Method m) noexcept;
Method method_from_string(const std::string& name);

/// Affine layer; weight is row-major (out x in).
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weight;
  std::vector<double> bias;

  DenseLayer() = default;
  DenseLayer(std::size_t in_dim, std::size_t out_dim)
      : in(in_dim), out(out_dim), weight(in_dim * out_dim, 0.0), bias(out_dim, 0.0) {}

  [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
    return {weight.data() + r * in, in};
  }
};

/// Rectifier MLP trunk followed by method-specific parallel output heads:
///   gmlr: one head of 2K (means, then log-variances)
///   crpc: one head of (K+1)K/2 pairwise logits
///   lsep: a score head and a threshold head of K each
struct ModelParams {
  Method method = Method::gmlr;
  std::size_t num_classes = 0;
  std::size_t input_dim = 0;
  std::vector<DenseLayer> trunk;
  std::vector<DenseLayer> heads;

  [[nodiscard]] std::size_t output_width() const noexcept;
  [[nodiscard]] std::size_t parameter_count() const noexcept;
  [[nodiscard]] std::vector<std::size_t> hidden_sizes() const;
  [[nodiscard]] ModelParams zeros_like() const;
  [[nodiscard]] double norm() const;

  /// Weight and bias vectors of every layer, trunk first, in a fixed order.
  std::vector<std::span<double>> blocks();
  [[nodiscard]] std::vector<std::span<const double>> blocks() const;
};

std::size_t head_width(Method m, std::size_t num_classes) noexcept;

/// Zero biases, weights uniform in +-1/sqrt(fan_in).
ModelParams init_model(Method method, std::size_t num_classes, std::size_t input_dim,
                       const std::vector<std::size_t>& hidden, std::uint64_t seed);

/// Layer outputs kept for the backward pass.
struct ForwardCache {
  std::vector<std::vector<double>> activations;  // [0] = input, then each trunk layer
  std::vector<double> output;                    // concatenated head outputs
};

ForwardCache forward_cached(const ModelParams& params, std::span<const double> features);
std::vector<double> forward(const ModelParams& params, std::span<const double> features);

GaussianPrediction as_gaussian(const ModelParams& params, std::span<const double> output);
PairwiseLogits as_pairwise(const ModelParams& params, std::span<const double> output);
ScoreThresholdHeads as_heads(const ModelParams& params, std::span<const double> output);

/// Which parameters receive gradient and optimizer updates.
enum class ParamScope { all, threshold_head };

/// Accumulates scale * d(loss)/d(params) into `grads`, given the loss
/// gradient w.r.t. the head outputs.
void backward(const ModelParams& params, const ForwardCache& cache, std::span<const double> grad_output,
              ModelParams& grads, ParamScope scope = ParamScope::all, double scale = 1.0);

/// Training stage; only LSEP distinguishes the ranking and classification
/// stages.
enum class Stage { ranking, classification };

struct HeadLoss {
  double value = 0.0;
  std::vector<double> grad;  // w.r.t. the concatenated head outputs
};

/// Per-instance loss of `method` at the head outputs.
HeadLoss head_loss(const ModelParams& params, std::span<const double> output, std::span<const Rank> ranks,
                   Supervision mode, Stage stage = Stage::ranking);

Prediction predict(const ModelParams& params, std::span<const double> features);

struct AdamConfig {
  double learning_rate = 1e-4;
  double weight_decay = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  long step = 0;

  static AdamState zeros_for(const ModelParams& params);
};

/// One Adam update with coupled L2 weight decay (g + wd * theta) and bias
/// correction. Blocks outside `scope` are left untouched.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, const AdamConfig& cfg,
               ParamScope scope = ParamScope::all);

}  // namespace mlrank
