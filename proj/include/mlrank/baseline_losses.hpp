#pragma once

#include <span>
#include <vector>

#include "mlrank/gmlr_loss.hpp"
#include "mlrank/rank_model.hpp"

namespace mlrank {

/// One logit per unordered pair over K real classes plus the virtual label
/// (index K). values[slot(u, v)] with u < v is the logit of "u outranks v".
class PairwiseLogits {
 public:
  PairwiseLogits() = default;
  explicit PairwiseLogits(std::size_t num_classes);
  PairwiseLogits(std::size_t num_classes, std::vector<double> values);

  static std::size_t width_for(std::size_t num_classes) noexcept {
    const std::size_t items = num_classes + 1;
    return items * (items - 1) / 2;
  }

  [[nodiscard]] std::size_t num_classes() const noexcept { return num_classes_; }
  [[nodiscard]] std::size_t num_items() const noexcept { return num_classes_ + 1; }
  [[nodiscard]] std::size_t virtual_label() const noexcept { return num_classes_; }

  /// Slot of the unordered pair {a, b}, a != b.
  [[nodiscard]] std::size_t slot(std::size_t a, std::size_t b) const noexcept;
  /// Logit that `winner` outranks `loser`, for either index order.
  [[nodiscard]] double oriented(std::size_t winner, std::size_t loser) const noexcept;

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

 private:
  std::size_t num_classes_ = 0;
  std::vector<double> values_;
};

/// Score head f and threshold head g, K entries each.
struct ScoreThresholdHeads {
  std::vector<double> scores;
  std::vector<double> thresholds;
};

struct PairwiseLoss {
  double value = 0.0;
  std::vector<double> grad;  // w.r.t. PairwiseLogits::values
};

struct HeadsLoss {
  double value = 0.0;
  std::vector<double> grad_scores;
  std::vector<double> grad_thresholds;
};

/// The bucket order of `ranks` with the virtual label inserted as its own
/// bucket between the lowest positive bucket and the negatives.
BucketOrder augmented_order(std::span<const Rank> ranks);

/// Weak: BCE per unique pair with targets from the positive/virtual-label
/// indicators. Strong: -log sigmoid over the augmented bucket order.
PairwiseLoss crpc_loss(const PairwiseLogits& logits, std::span<const Rank> ranks,
                       Supervision mode);

struct CrpcScores {
  std::vector<double> scores;
  double virtual_score = 0.0;
};

/// Soft-vote aggregation: item i scores sum_j sigmoid(logit(i over j)).
CrpcScores crpc_scores(const PairwiseLogits& logits);

/// log(1 + sum over the pair set of exp(f_v - f_u)); weak uses positive x
/// negative pairs, strong the full bucket order.
HeadsLoss lsep_rank_loss(const ScoreThresholdHeads& heads, std::span<const Rank> ranks,
                         Supervision mode);

/// sum_k BCE(sigmoid(f_k - g_k), r_k > 0). Only the thresholds receive a
/// gradient; grad_scores is all zeros.
HeadsLoss lsep_class_loss(const ScoreThresholdHeads& heads, std::span<const Rank> ranks);

}  // namespace mlrank
