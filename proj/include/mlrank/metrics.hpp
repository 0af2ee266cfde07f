#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mlrank/predictor.hpp"
#include "mlrank/rank_model.hpp"

namespace mlrank {

/// Pair counts between a ground-truth ranking and predicted scores.
struct PairCounts {
  long long concordant = 0;
  long long discordant = 0;
  long long total = 0;           // K(K-1)/2
  long long tied_prediction = 0;  // N1
  long long tied_truth = 0;       // N2
};

/// O(K log K) counting: sort by (truth, score), then count score inversions
/// with a merge sort.
PairCounts count_pairs(std::span<const Rank> gt_ranks, std::span<const double> pred_scores);

// The correlations throw DataError("undefined correlation") on a zero
// denominator.
double kendall_tau_b(std::span<const Rank> gt_ranks, std::span<const double> pred_scores);
double spearman_rho(std::span<const Rank> gt_ranks, std::span<const double> pred_scores);
/// Same statistic between two real sequences.
double spearman_rho(std::span<const double> a, std::span<const double> b);
double goodman_kruskal_gamma(std::span<const Rank> gt_ranks, std::span<const double> pred_scores);

/// 1-based average ranks, ascending by value; ties share the mean position.
std::vector<double> fractional_ranks(std::span<const double> values);

double hamming_loss(const std::vector<bool>& gt_positive, const std::vector<bool>& pred_positive);
/// 1 iff the top-scored class (lowest index on ties) is not a ground-truth
/// positive. Throws DataError("M-1 undefined") without positives.
int max1_error(const std::vector<bool>& gt_positive, std::span<const double> pred_scores);
/// TP / (TP + (FP + FN) / 2); 1 when both masks are empty.
double f1_score(const std::vector<bool>& gt_positive, const std::vector<bool>& pred_positive);

/// Per-instance averages on the [0, 1] scale. Correlations (and M-1) that are
/// undefined for an instance are left out of that metric's mean and counted.
struct MetricReport {
  double tau_b = 0.0;
  double spearman_rho = 0.0;
  double gamma = 0.0;
  double hamming_loss = 0.0;
  double max1 = 0.0;
  double f1 = 0.0;
  std::size_t n_instances = 0;
  std::size_t skipped_tau_b = 0;
  std::size_t skipped_spearman_rho = 0;
  std::size_t skipped_gamma = 0;
  std::size_t skipped_max1 = 0;
};

MetricReport evaluate_dataset(std::span<const Prediction> predictions,
                              std::span<const RankVector> ground_truths);

/// Fraction of ground-truth positive-positive strict pairs whose predicted
/// scores are ordered the same way (ties in score count as wrong).
double positive_pair_accuracy(std::span<const Prediction> predictions,
                              std::span<const RankVector> ground_truths);

}  // namespace mlrank
