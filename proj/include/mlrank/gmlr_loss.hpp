#pragma once

#include <span>
#include <string>
#include <vector>

#include "mlrank/rank_model.hpp"

namespace mlrank {

enum class Supervision { weak, strong };

const char* to_string(Supervision mode) noexcept;
Supervision supervision_from_string(const std::string& name);

/// Predicted Gaussian significance per class: mean and log-variance.
struct GaussianPrediction {
  std::vector<double> mu;
  std::vector<double> log_var;

  [[nodiscard]] std::size_t size() const noexcept { return mu.size(); }
  [[nodiscard]] double sigma(std::size_t c) const;
};

/// A loss term with its gradient w.r.t. the predicted means and log-variances.
struct LossTerm {
  double value = 0.0;
  std::vector<double> grad_mu;
  std::vector<double> grad_log_var;
};

struct LossValue {
  double classification = 0.0;
  double ranking = 0.0;
  double total = 0.0;
  double classification_weight = 0.0;
  double ranking_weight = 0.0;
  std::vector<double> grad_mu;
  std::vector<double> grad_log_var;
};

/// Sum over classes of the Bernoulli negative log-likelihood through
/// Q(mu_c, sigma_c); class c counts as positive iff ranks[c] > 0.
LossTerm classification_loss(const GaussianPrediction& p, std::span<const Rank> ranks);

/// Sum over `pairs` of -log Q(mu_u - mu_v, sqrt(sigma_u^2 + sigma_v^2)).
LossTerm ranking_loss(const GaussianPrediction& p, const PairSet& pairs);
LossTerm ranking_loss(const GaussianPrediction& p, const BucketOrder& order);

/// (1/K) L_c + (1/|pairs|) L_r, where the pair set is the full bucket order
/// (strong) or the positive x negative pairs (weak). An empty pair set drops
/// the ranking term.
LossValue gmlr_objective(const GaussianPrediction& p, std::span<const Rank> ranks,
                         Supervision mode);

}  // namespace mlrank
