#include "mlrank/baseline_losses.hpp"

#include <algorithm>
#include <cmath>

#include "mlrank/errors.hpp"

namespace mlrank {

namespace {

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
double softplus(double x) noexcept {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

void check_heads(const ScoreThresholdHeads& heads, std::span<const Rank> ranks) {
  require_same_size(heads.scores.size(), heads.thresholds.size(), "lsep heads");
  require_same_size(heads.scores.size(), ranks.size(), "lsep heads");
}

}  // namespace

PairwiseLogits::PairwiseLogits(std::size_t num_classes)
    : num_classes_(num_classes), values_(width_for(num_classes), 0.0) {}

PairwiseLogits::PairwiseLogits(std::size_t num_classes, std::vector<double> values)
    : num_classes_(num_classes), values_(std::move(values)) {
  require_same_size(values_.size(), width_for(num_classes), "pairwise logits");
}

std::size_t PairwiseLogits::slot(std::size_t a, std::size_t b) const noexcept {
  const std::size_t u = std::min(a, b);
  const std::size_t v = std::max(a, b);
  const std::size_t n = num_items();
  return u * (2 * n - u - 1) / 2 + (v - u - 1);
}

double PairwiseLogits::oriented(std::size_t winner, std::size_t loser) const noexcept {
  const double x = values_[slot(winner, loser)];
  return winner < loser ? x : -x;
}

BucketOrder augmented_order(std::span<const Rank> ranks) {
  const BucketOrder base = bucket_order_from_ranks(ranks);
  const std::size_t k = ranks.size();
  std::vector<std::vector<std::size_t>> buckets;
  const auto& src = base.buckets();
  const std::size_t positives = base.positive_bucket_count();
  for (std::size_t i = 0; i < positives; ++i) buckets.push_back(src[i]);
  buckets.push_back({k});
  if (base.lowest_is_negative()) buckets.push_back(src.back());
  return BucketOrder(std::move(buckets), k + 1, base.lowest_is_negative());
}

PairwiseLoss crpc_loss(const PairwiseLogits& logits, std::span<const Rank> ranks,
                       Supervision mode) {
  require_same_size(logits.num_classes(), ranks.size(), "crpc loss");
  PairwiseLoss out{0.0, std::vector<double>(logits.values().size(), 0.0)};
  const auto values = logits.values();

  if (mode == Supervision::strong) {
    for (const auto& [w, l] : strict_pairs(augmented_order(ranks))) {
      const std::size_t s = logits.slot(w, l);
      const double sign = w < l ? 1.0 : -1.0;
      const double z = sign * values[s];
      out.value += softplus(-z);
      out.grad[s] += -sign * sigmoid(-z);
    }
    return out;
  }

  const std::size_t n = logits.num_items();
  const std::size_t virt = logits.virtual_label();
  auto positive = [&](std::size_t c) { return c != virt && ranks[c] > 0; };
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const bool beta_u = positive(u) && (!positive(v) || v == virt);
      const bool beta_v = (!positive(u) || u == virt) && positive(v);
      if (!beta_u && !beta_v) continue;
      const std::size_t s = logits.slot(u, v);
      const double z = values[s];
      if (beta_u) {
        out.value += softplus(-z);
        out.grad[s] += -sigmoid(-z);
      }
      if (beta_v) {
        out.value += softplus(z);
        out.grad[s] += sigmoid(z);
      }
    }
  }
  return out;
}

CrpcScores crpc_scores(const PairwiseLogits& logits) {
  const std::size_t n = logits.num_items();
  std::vector<double> all(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) all[i] += sigmoid(logits.oriented(i, j));
    }
  }
  CrpcScores out;
  out.virtual_score = all.back();
  all.pop_back();
  out.scores = std::move(all);
  return out;
}

HeadsLoss lsep_rank_loss(const ScoreThresholdHeads& heads, std::span<const Rank> ranks,
                         Supervision mode) {
  check_heads(heads, ranks);
  const std::size_t k = ranks.size();
  HeadsLoss out{0.0, std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
  const PairSet pairs =
      mode == Supervision::strong ? strict_pairs(bucket_order_from_ranks(ranks)) : weak_pairs(ranks);
  if (pairs.empty()) return out;

  const auto& f = heads.scores;
  double shift = 0.0;
  for (const auto& [u, v] : pairs) shift = std::max(shift, f[v] - f[u]);
  // log(1 + sum e^x) = shift + log(e^-shift + sum e^(x - shift))
  double denom = std::exp(-shift);
  std::vector<double> terms(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    terms[i] = std::exp(f[pairs[i].loser] - f[pairs[i].winner] - shift);
    denom += terms[i];
  }
  out.value = shift + std::log(denom);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double w = terms[i] / denom;
    out.grad_scores[pairs[i].loser] += w;
    out.grad_scores[pairs[i].winner] -= w;
  }
  return out;
}

HeadsLoss lsep_class_loss(const ScoreThresholdHeads& heads, std::span<const Rank> ranks) {
  check_heads(heads, ranks);
  const std::size_t k = ranks.size();
  HeadsLoss out{0.0, std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
  for (std::size_t c = 0; c < k; ++c) {
    const double z = heads.scores[c] - heads.thresholds[c];
    const double y = ranks[c] > 0 ? 1.0 : 0.0;
    out.value += softplus(z) - y * z;
    // dL/dz = sigmoid(z) - y and dz/dg = -1
    out.grad_thresholds[c] = y - sigmoid(z);
  }
  return out;
}

}  // namespace mlrank
