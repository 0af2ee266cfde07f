#pragma once

#include <cmath>

namespace mlrank {

/// Probability floor applied before any logarithm: q is kept in
/// [kProbEpsilon, 1 - kProbEpsilon].
inline constexpr double kProbEpsilon = 1e-12;

/// Parameters of a Gaussian significance value N(mu, sigma^2).
struct GaussianParam {
  double mu = 0.0;
  double sigma = 1.0;

  [[nodiscard]] bool valid() const noexcept {
    return std::isfinite(mu) && std::isfinite(sigma) && sigma > 0.0;
  }
};

double erf(double x) noexcept;

/// P(z > 0) for z ~ N(mu, sigma^2), clamped into [eps, 1 - eps].
double q_prob(GaussianParam g) noexcept;

/// Distribution of s_u - s_v for independent s_u, s_v: variances add.
GaussianParam diff_param(GaussianParam u, GaussianParam v) noexcept;

/// log(q_prob(g)); never -inf because of the clamp.
double log_q_prob(GaussianParam g) noexcept;

/// Value and partial derivatives of q_prob (derivatives of the clamped
/// function, so both are zero where the clamp is active).
struct QProbGrad {
  double value = 0.0;
  double d_mu = 0.0;
  double d_sigma = 0.0;
};

QProbGrad q_prob_grad(GaussianParam g) noexcept;

/// Value and partial derivatives of log_q_prob.
QProbGrad log_q_prob_grad(GaussianParam g) noexcept;

}  // namespace mlrank
