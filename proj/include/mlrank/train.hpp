#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlrank/model.hpp"
#include "mlrank/rank_model.hpp"

namespace mlrank {

struct TrainConfig {
  AdamConfig adam;
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  double lr_decay = 0.9;  // multiplied into the learning rate after every epoch
  std::uint64_t seed = 0;
  Method method = Method::gmlr;
  Supervision mode = Supervision::strong;
  std::vector<std::size_t> hidden{64, 64};
  // LSEP threshold stage; 0 means the same budget as the ranking stage
  std::size_t threshold_epochs = 0;
  bool early_stop = false;
  std::size_t patience = 5;
  double tolerance = 1e-5;

  /// Throws DataError when a rate or size is out of range.
  void validate() const;
};

struct EpochRecord {
  Stage stage = Stage::ranking;
  std::size_t epoch = 0;  // 1-based within its stage
  double loss = 0.0;      // mean per-instance loss over the epoch
  double learning_rate = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochRecord> log;
};

/// Mean per-instance loss over `data`.
double dataset_loss(const ModelParams& params, std::span<const RankedInstance> data, Supervision mode,
                    Stage stage = Stage::ranking);

/// Gradient of dataset_loss w.r.t. the parameters; returns the loss value.
double dataset_gradient(const ModelParams& params, std::span<const RankedInstance> data, Supervision mode,
                        Stage stage, ParamScope scope, ModelParams& grads);

/// Runs `epochs` epochs of shuffled mini-batch Adam on one stage.
/// Throws NumericError when a batch loss or the parameters turn non-finite.
std::vector<EpochRecord> train_stage(ModelParams& params, std::span<const RankedInstance> data,
                                     const TrainConfig& cfg, Stage stage, std::size_t epochs);

/// Initializes a model from cfg.seed and trains it. LSEP runs the ranking
/// stage over all parameters, then the classification stage on the
/// threshold head only.
TrainResult train(std::span<const RankedInstance> data, const TrainConfig& cfg);

}  // namespace mlrank
