#include "mlrank/predictor.hpp"

#include <algorithm>
#include <numeric>

#include "mlrank/errors.hpp"

namespace mlrank {

RankVector assign_ranks(std::span<const double> scores, const std::vector<bool>& positive_mask) {
  require_same_size(scores.size(), positive_mask.size(), "assign ranks");
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (positive_mask[c]) order.push_back(c);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  RankVector ranks(scores.size(), 0);
  auto next = static_cast<Rank>(order.size());
  for (std::size_t c : order) ranks[c] = next--;
  return ranks;
}

Prediction make_prediction(std::vector<double> scores, std::vector<bool> positive_mask) {
  Prediction out;
  out.predicted_ranks = assign_ranks(scores, positive_mask);
  out.scores = std::move(scores);
  out.positive_mask = std::move(positive_mask);
  return out;
}

Prediction predict_gmlr(const GaussianPrediction& p) {
  std::vector<bool> mask(p.mu.size());
  for (std::size_t c = 0; c < p.mu.size(); ++c) mask[c] = p.mu[c] >= 0.0;
  return make_prediction(p.mu, std::move(mask));
}

Prediction predict_lsep(const ScoreThresholdHeads& heads) {
  require_same_size(heads.scores.size(), heads.thresholds.size(), "lsep heads");
  std::vector<bool> mask(heads.scores.size());
  for (std::size_t c = 0; c < mask.size(); ++c) mask[c] = heads.scores[c] > heads.thresholds[c];
  return make_prediction(heads.scores, std::move(mask));
}

Prediction predict_crpc(const PairwiseLogits& logits) {
  CrpcScores s = crpc_scores(logits);
  std::vector<bool> mask(s.scores.size());
  for (std::size_t c = 0; c < mask.size(); ++c) mask[c] = s.scores[c] > s.virtual_score;
  return make_prediction(std::move(s.scores), std::move(mask));
}

}  // namespace mlrank
