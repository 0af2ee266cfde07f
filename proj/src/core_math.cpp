#include "mlrank/core_math.hpp"

#include <algorithm>
#include <numbers>

namespace mlrank {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

// Unclamped standard normal CDF at t. erfc keeps full relative accuracy in
// the lower tail, where 1 - erf(.) would cancel.
double normal_cdf(double t) noexcept { return 0.5 * std::erfc(-t * kInvSqrt2); }

double normal_pdf(double t) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

}  // namespace

double erf(double x) noexcept { return std::erf(x); }

double q_prob(GaussianParam g) noexcept {
  const double q = normal_cdf(g.mu / g.sigma);
  return std::clamp(q, kProbEpsilon, 1.0 - kProbEpsilon);
}

GaussianParam diff_param(GaussianParam u, GaussianParam v) noexcept {
  return {u.mu - v.mu, std::sqrt(u.sigma * u.sigma + v.sigma * v.sigma)};
}

double log_q_prob(GaussianParam g) noexcept { return std::log(q_prob(g)); }

QProbGrad q_prob_grad(GaussianParam g) noexcept {
  const double t = g.mu / g.sigma;
  const double raw = normal_cdf(t);
  QProbGrad out;
  out.value = std::clamp(raw, kProbEpsilon, 1.0 - kProbEpsilon);
  if (raw <= kProbEpsilon || raw >= 1.0 - kProbEpsilon) {
    return out;
  }
  const double pdf = normal_pdf(t);
  out.d_mu = pdf / g.sigma;
  out.d_sigma = -pdf * t / g.sigma;
  return out;
}

QProbGrad log_q_prob_grad(GaussianParam g) noexcept {
  const QProbGrad q = q_prob_grad(g);
  return {std::log(q.value), q.d_mu / q.value, q.d_sigma / q.value};
}

}  // namespace mlrank
