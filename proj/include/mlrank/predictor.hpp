#pragma once

#include <span>
#include <vector>

#include "mlrank/baseline_losses.hpp"
#include "mlrank/gmlr_loss.hpp"
#include "mlrank/rank_model.hpp"

namespace mlrank {

/// Scores, bipartition and dense predicted ranks (1 = lowest positive,
/// 0 = predicted negative).
struct Prediction {
  std::vector<double> scores;
  std::vector<bool> positive_mask;
  RankVector predicted_ranks;
};

/// Dense ranks for the masked classes by descending score; equal scores
/// break by ascending class index (the lower index gets the higher rank).
RankVector assign_ranks(std::span<const double> scores, const std::vector<bool>& positive_mask);

Prediction make_prediction(std::vector<double> scores, std::vector<bool> positive_mask);

/// Scores are the means; class c is positive iff mu_c >= 0.
Prediction predict_gmlr(const GaussianPrediction& p);

/// Scores are f; class k is positive iff f_k > g_k.
Prediction predict_lsep(const ScoreThresholdHeads& heads);

/// Soft-vote scores; positive iff score > virtual label score.
Prediction predict_crpc(const PairwiseLogits& logits);

}  // namespace mlrank
