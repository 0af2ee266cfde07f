#include "mlrank/train.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "mlrank/errors.hpp"
#include "mlrank/rng.hpp"

namespace mlrank {

void TrainConfig::validate() const {
  if (!(adam.learning_rate > 0.0)) throw DataError("train config: learning_rate must be positive");
  if (!(adam.weight_decay >= 0.0)) throw DataError("train config: weight_decay must be non-negative");
  if (!(adam.beta1 > 0.0 && adam.beta1 < 1.0) || !(adam.beta2 > 0.0 && adam.beta2 < 1.0)) {
    throw DataError("train config: adam betas must lie in (0, 1)");
  }
  if (!(adam.epsilon > 0.0)) throw DataError("train config: epsilon must be positive");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw DataError("train config: lr_decay must lie in (0, 1]");
  if (batch_size == 0) throw DataError("train config: batch_size must be positive");
  if (early_stop && patience == 0) throw DataError("train config: patience must be positive");
}

namespace {

void check_instance(const ModelParams& params, const RankedInstance& x) {
  require_same_size(x.features.size(), params.input_dim, "instance features");
  require_same_size(x.ranks.size(), params.num_classes, "instance ranks");
}

// Accumulates the gradient of the mean loss over data[idx...] into grads.
double accumulate(const ModelParams& params, std::span<const RankedInstance> data,
                  std::span<const std::size_t> idx, Supervision mode, Stage stage, ParamScope scope,
                  ModelParams& grads) {
  const double scale = 1.0 / static_cast<double>(idx.size());
  double total = 0.0;
  for (std::size_t i : idx) {
    const RankedInstance& x = data[i];
    check_instance(params, x);
    const ForwardCache cache = forward_cached(params, x.features);
    const HeadLoss hl = head_loss(params, cache.output, x.ranks, mode, stage);
    total += hl.value;
    backward(params, cache, hl.grad, grads, scope, scale);
  }
  return total * scale;
}

bool all_finite(const ModelParams& p) {
  for (auto block : p.blocks()) {
    for (double v : block) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

[[noreturn]] void numeric_abort(std::size_t epoch, std::size_t batch, const ModelParams& p, const char* what) {
  std::ostringstream os;
  os << what << " at epoch " << epoch << ", batch " << batch << " (parameter norm " << p.norm() << ")";
  throw NumericError(os.str());
}

}  // namespace

double dataset_loss(const ModelParams& params, std::span<const RankedInstance> data, Supervision mode,
                    Stage stage) {
  if (data.empty()) throw DataError("empty dataset");
  double total = 0.0;
  for (const auto& x : data) {
    check_instance(params, x);
    total += head_loss(params, forward(params, x.features), x.ranks, mode, stage).value;
  }
  return total / static_cast<double>(data.size());
}

double dataset_gradient(const ModelParams& params, std::span<const RankedInstance> data, Supervision mode,
                        Stage stage, ParamScope scope, ModelParams& grads) {
  if (data.empty()) throw DataError("empty dataset");
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return accumulate(params, data, idx, mode, stage, scope, grads);
}

std::vector<EpochRecord> train_stage(ModelParams& params, std::span<const RankedInstance> data,
                                     const TrainConfig& cfg, Stage stage, std::size_t epochs) {
  cfg.validate();
  if (data.empty()) throw DataError("empty dataset");
  const ParamScope scope = stage == Stage::classification ? ParamScope::threshold_head : ParamScope::all;
  Rng rng(derive_seed(cfg.seed, stage == Stage::ranking ? "shuffle" : "shuffle-threshold"));
  AdamState state = AdamState::zeros_for(params);
  AdamConfig adam = cfg.adam;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<EpochRecord> log;
  double best = 0.0;
  std::size_t stale = 0;
  for (std::size_t epoch = 1; epoch <= epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double sum = 0.0;
    std::size_t batch = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size, ++batch) {
      const std::size_t len = std::min(cfg.batch_size, order.size() - start);
      const std::span<const std::size_t> idx(order.data() + start, len);
      ModelParams grads = params.zeros_like();
      const double loss = accumulate(params, data, idx, cfg.mode, stage, scope, grads);
      if (!std::isfinite(loss)) numeric_abort(epoch, batch, params, "non-finite loss");
      sum += loss * static_cast<double>(len);
      adam_step(params, grads, state, adam, scope);
      if (!all_finite(params)) numeric_abort(epoch, batch, params, "non-finite parameters");
    }
    const double epoch_loss = sum / static_cast<double>(order.size());
    log.push_back({stage, epoch, epoch_loss, adam.learning_rate});
    adam.learning_rate *= cfg.lr_decay;

    if (cfg.early_stop) {
      if (epoch > 1 && (best - epoch_loss) < cfg.tolerance * std::abs(best)) {
        if (++stale >= cfg.patience) break;
      } else {
        stale = 0;
      }
      if (epoch == 1 || epoch_loss < best) best = epoch_loss;
    }
  }
  return log;
}

TrainResult train(std::span<const RankedInstance> data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.empty()) throw DataError("empty dataset");
  const std::size_t k = data.front().ranks.size();
  const std::size_t d = data.front().features.size();
  TrainResult result{init_model(cfg.method, k, d, cfg.hidden, cfg.seed), {}};
  result.log = train_stage(result.params, data, cfg, Stage::ranking, cfg.epochs);
  if (cfg.method == Method::lsep) {
    const std::size_t epochs2 = cfg.threshold_epochs > 0 ? cfg.threshold_epochs : cfg.epochs;
    auto stage2 = train_stage(result.params, data, cfg, Stage::classification, epochs2);
    result.log.insert(result.log.end(), stage2.begin(), stage2.end());
  }
  return result;
}

}  // namespace mlrank
