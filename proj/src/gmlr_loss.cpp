#include "mlrank/gmlr_loss.hpp"

#include <cmath>
#include <string>

#include "mlrank/core_math.hpp"
#include "mlrank/errors.hpp"

namespace mlrank {

const char* to_string(Supervision mode) noexcept {
  return mode == Supervision::weak ? "weak" : "strong";
}

Supervision supervision_from_string(const std::string& name) {
  if (name == "weak") return Supervision::weak;
  if (name == "strong") return Supervision::strong;
  throw DataError("unknown supervision mode '" + name + "'");
}

double GaussianPrediction::sigma(std::size_t c) const { return std::exp(0.5 * log_var[c]); }

namespace {

void check_prediction(const GaussianPrediction& p) {
  require_same_size(p.mu.size(), p.log_var.size(), "gaussian prediction");
}

}  // namespace

LossTerm classification_loss(const GaussianPrediction& p, std::span<const Rank> ranks) {
  check_prediction(p);
  require_same_size(p.size(), ranks.size(), "classification loss");
  const std::size_t k = p.size();
  LossTerm out{0.0, std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
  for (std::size_t c = 0; c < k; ++c) {
    const double sigma = p.sigma(c);
    // 1 - Q(mu, sigma) == Q(-mu, sigma).
    const double sign = ranks[c] > 0 ? 1.0 : -1.0;
    const QProbGrad lq = log_q_prob_grad({sign * p.mu[c], sigma});
    out.value -= lq.value;
    out.grad_mu[c] = -sign * lq.d_mu;
    out.grad_log_var[c] = -lq.d_sigma * 0.5 * sigma;
  }
  return out;
}

LossTerm ranking_loss(const GaussianPrediction& p, const PairSet& pairs) {
  check_prediction(p);
  const std::size_t k = p.size();
  LossTerm out{0.0, std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
  for (const auto& [u, v] : pairs) {
    if (u >= k || v >= k) throw DimensionError("ranking loss: pair index out of range");
    const double su = p.sigma(u);
    const double sv = p.sigma(v);
    const GaussianParam d = diff_param({p.mu[u], su}, {p.mu[v], sv});
    const QProbGrad lq = log_q_prob_grad(d);
    out.value -= lq.value;
    out.grad_mu[u] -= lq.d_mu;
    out.grad_mu[v] += lq.d_mu;
    // d sigma_uv / d log_var_u = sigma_u^2 / (2 sigma_uv)
    out.grad_log_var[u] -= lq.d_sigma * su * su / (2.0 * d.sigma);
    out.grad_log_var[v] -= lq.d_sigma * sv * sv / (2.0 * d.sigma);
  }
  return out;
}

LossTerm ranking_loss(const GaussianPrediction& p, const BucketOrder& order) {
  require_same_size(p.size(), order.num_classes(), "ranking loss");
  return ranking_loss(p, strict_pairs(order));
}

LossValue gmlr_objective(const GaussianPrediction& p, std::span<const Rank> ranks,
                         Supervision mode) {
  require_same_size(p.size(), ranks.size(), "gmlr objective");
  const std::size_t k = p.size();
  const PairSet pairs =
      mode == Supervision::strong ? strict_pairs(bucket_order_from_ranks(ranks)) : weak_pairs(ranks);

  const LossTerm lc = classification_loss(p, ranks);
  LossValue out;
  out.classification = lc.value;
  out.classification_weight = 1.0 / static_cast<double>(k);
  out.grad_mu.resize(k);
  out.grad_log_var.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    out.grad_mu[c] = out.classification_weight * lc.grad_mu[c];
    out.grad_log_var[c] = out.classification_weight * lc.grad_log_var[c];
  }
  if (!pairs.empty()) {
    const LossTerm lr = ranking_loss(p, pairs);
    out.ranking = lr.value;
    out.ranking_weight = 1.0 / static_cast<double>(pairs.size());
    for (std::size_t c = 0; c < k; ++c) {
      out.grad_mu[c] += out.ranking_weight * lr.grad_mu[c];
      out.grad_log_var[c] += out.ranking_weight * lr.grad_log_var[c];
    }
  }
  out.total = out.classification_weight * out.classification + out.ranking_weight * out.ranking;
  return out;
}

}  // namespace mlrank
