#include "mlrank/rank_model.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "mlrank/core_math.hpp"
#include "mlrank/errors.hpp"

namespace mlrank {

std::vector<bool> RankedInstance::positive_mask() const {
  std::vector<bool> mask(ranks.size());
  for (std::size_t c = 0; c < ranks.size(); ++c) mask[c] = ranks[c] > 0;
  return mask;
}

BucketOrder::BucketOrder(std::vector<std::vector<std::size_t>> buckets, std::size_t num_classes,
                         bool lowest_is_negative)
    : buckets_(std::move(buckets)),
      num_classes_(num_classes),
      lowest_is_negative_(lowest_is_negative && !buckets_.empty()) {
  std::vector<bool> seen(num_classes_, false);
  for (auto& bucket : buckets_) {
    if (bucket.empty()) throw DataError("bucket order: empty bucket");
    std::sort(bucket.begin(), bucket.end());
    for (std::size_t c : bucket) {
      if (c >= num_classes_) throw DataError("bucket order: class index out of range");
      if (seen[c]) throw DataError("bucket order: class " + std::to_string(c) + " appears twice");
      seen[c] = true;
    }
  }
}

std::size_t BucketOrder::covered_count() const noexcept {
  std::size_t n = 0;
  for (const auto& b : buckets_) n += b.size();
  return n;
}

BucketOrder bucket_order_from_ranks(std::span<const Rank> ranks) {
  if (ranks.empty()) throw DataError("empty label vector");
  std::map<Rank, std::vector<std::size_t>, std::greater<>> by_rank;
  for (std::size_t c = 0; c < ranks.size(); ++c) by_rank[ranks[c]].push_back(c);
  std::vector<std::vector<std::size_t>> buckets;
  buckets.reserve(by_rank.size());
  bool has_negative = false;
  for (auto& [rank, members] : by_rank) {
    has_negative = rank == 0;
    buckets.push_back(std::move(members));
  }
  return BucketOrder(std::move(buckets), ranks.size(), has_negative);
}

PairSet strict_pairs(const BucketOrder& order) {
  PairSet pairs;
  const auto& buckets = order.buckets();
  for (std::size_t k = 0; k < buckets.size(); ++k) {
    for (std::size_t l = k + 1; l < buckets.size(); ++l) {
      for (std::size_t u : buckets[k]) {
        for (std::size_t v : buckets[l]) pairs.push_back({u, v});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

PairSet weak_pairs(std::span<const Rank> ranks) {
  PairSet pairs;
  for (std::size_t u = 0; u < ranks.size(); ++u) {
    if (ranks[u] == 0) continue;
    for (std::size_t v = 0; v < ranks.size(); ++v) {
      if (ranks[v] == 0) pairs.push_back({u, v});
    }
  }
  return pairs;
}

namespace {

void check_params(std::span<const double> mu, std::span<const double> sigma,
                  const BucketOrder& order) {
  require_same_size(mu.size(), sigma.size(), "bucket likelihood");
  require_same_size(mu.size(), order.num_classes(), "bucket likelihood");
}

double pair_prob(std::span<const double> mu, std::span<const double> sigma, std::size_t u,
                 std::size_t v) {
  return q_prob(diff_param({mu[u], sigma[u]}, {mu[v], sigma[v]}));
}

}  // namespace

double bucket_likelihood(std::span<const double> mu, std::span<const double> sigma,
                         const BucketOrder& order) {
  check_params(mu, sigma, order);
  double p = 1.0;
  for (const auto& [u, v] : strict_pairs(order)) p *= pair_prob(mu, sigma, u, v);
  return p;
}

double bucket_likelihood_oracle(std::span<const double> mu, std::span<const double> sigma,
                                const BucketOrder& order) {
  check_params(mu, sigma, order);
  if (order.covered_count() > kEnumerationBound) throw DataError("enumeration bound exceeded");

  // Each agreeing total order is one choice of permutation inside every
  // bucket; walk them in lexicographic order bucket by bucket.
  std::vector<std::vector<std::size_t>> perms = order.buckets();
  std::vector<std::size_t> items;
  for (const auto& b : perms) items.insert(items.end(), b.begin(), b.end());
  std::sort(items.begin(), items.end());

  std::vector<std::size_t> position(order.num_classes(), 0);
  double total = 0.0;
  for (;;) {
    std::size_t pos = 0;
    for (const auto& b : perms) {
      for (std::size_t c : b) position[c] = pos++;
    }
    double p = 1.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = i + 1; j < items.size(); ++j) {
        const std::size_t u = items[i];
        const std::size_t v = items[j];
        const double u_over_v = pair_prob(mu, sigma, u, v);
        p *= position[u] < position[v] ? u_over_v : 1.0 - u_over_v;
      }
    }
    total += p;

    std::size_t k = 0;
    while (k < perms.size() && !std::next_permutation(perms[k].begin(), perms[k].end())) ++k;
    if (k == perms.size()) break;
  }
  return total;
}

}  // namespace mlrank
