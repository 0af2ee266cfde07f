#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mlrank {

using Rank = std::uint32_t;
using RankVector = std::vector<Rank>;

/// One instance of a ranked multi-label dataset. ranks[c] == 0 marks class c
/// as negative; positive ranks only matter through their comparison order.
struct RankedInstance {
  std::vector<double> features;
  RankVector ranks;

  [[nodiscard]] std::vector<bool> positive_mask() const;
};

/// Ordered pair (winner, loser): winner outranks loser.
struct ClassPair {
  std::size_t winner = 0;
  std::size_t loser = 0;

  friend bool operator==(const ClassPair&, const ClassPair&) = default;
  friend auto operator<=>(const ClassPair&, const ClassPair&) = default;
};

using PairSet = std::vector<ClassPair>;

/// Partition of class indices into totally ordered buckets, highest bucket
/// first. Classes inside a bucket are tied.
class BucketOrder {
 public:
  BucketOrder() = default;

  /// Buckets must be non-empty, disjoint and drawn from [0, num_classes).
  /// `lowest_is_negative` marks the last bucket as the rank-0 bucket.
  BucketOrder(std::vector<std::vector<std::size_t>> buckets, std::size_t num_classes,
              bool lowest_is_negative = false);

  [[nodiscard]] const std::vector<std::vector<std::size_t>>& buckets() const noexcept {
    return buckets_;
  }
  [[nodiscard]] std::size_t bucket_count() const noexcept { return buckets_.size(); }
  [[nodiscard]] std::size_t num_classes() const noexcept { return num_classes_; }
  [[nodiscard]] bool lowest_is_negative() const noexcept { return lowest_is_negative_; }

  /// Number of classes placed in some bucket.
  [[nodiscard]] std::size_t covered_count() const noexcept;

  /// Buckets holding positive classes (all of them unless the lowest is the
  /// rank-0 bucket).
  [[nodiscard]] std::size_t positive_bucket_count() const noexcept {
    return lowest_is_negative_ ? buckets_.size() - 1 : buckets_.size();
  }

 private:
  std::vector<std::vector<std::size_t>> buckets_;
  std::size_t num_classes_ = 0;
  bool lowest_is_negative_ = false;
};

/// Groups equal ranks into buckets sorted by decreasing rank; rank-0 classes
/// form the lowest bucket. Throws DataError("empty label vector").
BucketOrder bucket_order_from_ranks(std::span<const Rank> ranks);

/// Every (u, v) with u in a higher bucket than v, sorted.
PairSet strict_pairs(const BucketOrder& order);

/// Positive x negative pairs only, sorted.
PairSet weak_pairs(std::span<const Rank> ranks);

/// Product formula: prod over strict pairs of Q(mu_u - mu_v, sqrt(s_u^2 + s_v^2)).
double bucket_likelihood(std::span<const double> mu, std::span<const double> sigma,
                         const BucketOrder& order);

inline constexpr std::size_t kEnumerationBound = 8;

/// Brute-force likelihood: sums the likelihood of every total order that
/// agrees with `order`, each evaluated over the unique pairs u < v. Limited
/// to kEnumerationBound covered classes.
double bucket_likelihood_oracle(std::span<const double> mu, std::span<const double> sigma,
                                const BucketOrder& order);

}  // namespace mlrank
