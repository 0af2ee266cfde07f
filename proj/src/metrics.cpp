#include "mlrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlrank/errors.hpp"

namespace mlrank {

namespace {

long long tie_pairs(long long run) { return run * (run - 1) / 2; }

// Counts strict inversions of `v` while sorting it.
long long merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                      std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  long long swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, out = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<long long>(mid - i);
      buf[out++] = v[j++];
    } else {
      buf[out++] = v[i++];
    }
  }
  while (i < mid) buf[out++] = v[i++];
  while (j < hi) buf[out++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

void check_lengths(std::span<const Rank> gt, std::span<const double> scores) {
  require_same_size(gt.size(), scores.size(), "rank correlation");
  if (gt.size() < 2) throw DataError("undefined correlation");
}

class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

PairCounts count_pairs(std::span<const Rank> gt_ranks, std::span<const double> pred_scores) {
  require_same_size(gt_ranks.size(), pred_scores.size(), "pair counts");
  const std::size_t n = gt_ranks.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (gt_ranks[a] != gt_ranks[b]) return gt_ranks[a] < gt_ranks[b];
    return pred_scores[a] < pred_scores[b];
  });

  PairCounts out;
  out.total = tie_pairs(static_cast<long long>(n));
  long long joint = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && gt_ranks[idx[j]] == gt_ranks[idx[i]]) ++j;
    out.tied_truth += tie_pairs(static_cast<long long>(j - i));
    for (std::size_t a = i; a < j;) {
      std::size_t b = a;
      while (b < j && pred_scores[idx[b]] == pred_scores[idx[a]]) ++b;
      joint += tie_pairs(static_cast<long long>(b - a));
      a = b;
    }
    i = j;
  }

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = pred_scores[idx[i]];
  std::vector<double> buf(n);
  out.discordant = merge_count(ys, buf, 0, n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && ys[j] == ys[i]) ++j;
    out.tied_prediction += tie_pairs(static_cast<long long>(j - i));
    i = j;
  }
  out.concordant = out.total - out.tied_prediction - out.tied_truth + joint - out.discordant;
  return out;
}

double kendall_tau_b(std::span<const Rank> gt_ranks, std::span<const double> pred_scores) {
  check_lengths(gt_ranks, pred_scores);
  const PairCounts c = count_pairs(gt_ranks, pred_scores);
  const auto denom = static_cast<double>(c.total - c.tied_prediction) *
                     static_cast<double>(c.total - c.tied_truth);
  if (denom <= 0.0) throw DataError("undefined correlation");
  return static_cast<double>(c.concordant - c.discordant) / std::sqrt(denom);
}

double goodman_kruskal_gamma(std::span<const Rank> gt_ranks, std::span<const double> pred_scores) {
  check_lengths(gt_ranks, pred_scores);
  const PairCounts c = count_pairs(gt_ranks, pred_scores);
  const long long denom = c.concordant + c.discordant;
  if (denom == 0) throw DataError("undefined correlation");
  return static_cast<double>(c.concordant - c.discordant) / static_cast<double>(denom);
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && values[idx[j]] == values[idx[i]]) ++j;
    // positions i+1 .. j share their mean
    const double mean = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[idx[t]] = mean;
    i = j;
  }
  return ranks;
}

double spearman_rho(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "spearman rho");
  if (a.size() < 2) throw DataError("undefined correlation");
  auto flat = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
  };
  if (flat(a) || flat(b)) throw DataError("undefined correlation");
  const std::vector<double> ra = fractional_ranks(a);
  const std::vector<double> rb = fractional_ranks(b);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum_sq += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  const auto k = static_cast<double>(a.size());
  return 1.0 - 6.0 * sum_sq / (k * (k * k - 1.0));
}

double spearman_rho(std::span<const Rank> gt_ranks, std::span<const double> pred_scores) {
  check_lengths(gt_ranks, pred_scores);
  const std::vector<double> gt(gt_ranks.begin(), gt_ranks.end());
  return spearman_rho(std::span<const double>(gt), pred_scores);
}

double hamming_loss(const std::vector<bool>& gt_positive, const std::vector<bool>& pred_positive) {
  require_same_size(gt_positive.size(), pred_positive.size(), "hamming loss");
  if (gt_positive.empty()) throw DimensionError("hamming loss: empty masks");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < gt_positive.size(); ++i) wrong += gt_positive[i] != pred_positive[i];
  return static_cast<double>(wrong) / static_cast<double>(gt_positive.size());
}

int max1_error(const std::vector<bool>& gt_positive, std::span<const double> pred_scores) {
  require_same_size(gt_positive.size(), pred_scores.size(), "max-1 error");
  if (std::none_of(gt_positive.begin(), gt_positive.end(), [](bool b) { return b; })) {
    throw DataError("M-1 undefined");
  }
  // max_element returns the first maximum, i.e. the lowest index on ties.
  const auto top = static_cast<std::size_t>(
      std::max_element(pred_scores.begin(), pred_scores.end()) - pred_scores.begin());
  return gt_positive[top] ? 0 : 1;
}

double f1_score(const std::vector<bool>& gt_positive, const std::vector<bool>& pred_positive) {
  require_same_size(gt_positive.size(), pred_positive.size(), "f1 score");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gt_positive.size(); ++i) {
    tp += gt_positive[i] && pred_positive[i];
    fp += !gt_positive[i] && pred_positive[i];
    fn += gt_positive[i] && !pred_positive[i];
  }
  if (tp + fp + fn == 0) return 1.0;
  return static_cast<double>(tp) / (static_cast<double>(tp) + 0.5 * static_cast<double>(fp + fn));
}

MetricReport evaluate_dataset(std::span<const Prediction> predictions,
                              std::span<const RankVector> ground_truths) {
  require_same_size(predictions.size(), ground_truths.size(), "evaluate dataset");
  if (predictions.empty()) throw DataError("evaluate dataset: empty dataset");

  CompensatedSum tau, rho, gam, hl, m1, f1;
  MetricReport r;
  r.n_instances = predictions.size();
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const Prediction& p = predictions[i];
    const RankVector& gt = ground_truths[i];
    require_same_size(p.scores.size(), gt.size(), "evaluate dataset");
    std::vector<bool> gt_mask(gt.size());
    for (std::size_t c = 0; c < gt.size(); ++c) gt_mask[c] = gt[c] > 0;

    auto accumulate = [&](CompensatedSum& sum, std::size_t& skipped, auto&& metric) {
      try {
        sum.add(metric());
      } catch (const DataError&) {
        ++skipped;
      }
    };
    accumulate(tau, r.skipped_tau_b, [&] { return kendall_tau_b(gt, p.scores); });
    accumulate(rho, r.skipped_spearman_rho, [&] { return spearman_rho(gt, p.scores); });
    accumulate(gam, r.skipped_gamma, [&] { return goodman_kruskal_gamma(gt, p.scores); });
    accumulate(m1, r.skipped_max1, [&] { return static_cast<double>(max1_error(gt_mask, p.scores)); });
    hl.add(hamming_loss(gt_mask, p.positive_mask));
    f1.add(f1_score(gt_mask, p.positive_mask));
  }

  auto mean = [&](const CompensatedSum& s, std::size_t skipped) {
    const std::size_t used = r.n_instances - skipped;
    return used == 0 ? std::nan("") : s.value() / static_cast<double>(used);
  };
  r.tau_b = mean(tau, r.skipped_tau_b);
  r.spearman_rho = mean(rho, r.skipped_spearman_rho);
  r.gamma = mean(gam, r.skipped_gamma);
  r.max1 = mean(m1, r.skipped_max1);
  r.hamming_loss = mean(hl, 0);
  r.f1 = mean(f1, 0);
  return r;
}

double positive_pair_accuracy(std::span<const Prediction> predictions,
                              std::span<const RankVector> ground_truths) {
  require_same_size(predictions.size(), ground_truths.size(), "positive pair accuracy");
  std::size_t correct = 0, total = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const RankVector& gt = ground_truths[i];
    const auto& s = predictions[i].scores;
    for (std::size_t u = 0; u < gt.size(); ++u) {
      for (std::size_t v = 0; v < gt.size(); ++v) {
        if (gt[u] > gt[v] && gt[v] > 0) {
          ++total;
          correct += s[u] > s[v];
        }
      }
    }
  }
  return total == 0 ? std::nan("") : static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace mlrank
