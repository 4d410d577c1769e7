#pragma once

// Log-gamma, digamma and the Beta distribution functions used by the
// Dirichlet solver and the entropy baselines.

#include <stdexcept>

namespace souq {

/// Largest shape parameter accepted by the Beta routines.
inline constexpr double kMaxBetaShape = 1e6;

/// Raised when an iterative routine fails to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Beta(alpha, beta) shape with both parameters in (0, kMaxBetaShape].
class BetaShape {
 public:
  BetaShape(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  friend bool operator==(const BetaShape&, const BetaShape&) = default;

 private:
  double alpha_;
  double beta_;
};

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// psi(x) = d/dx ln Gamma(x) for x > 0.
double digamma(double x);

/// ln B(a, b).
double log_beta(double a, double b);

/// Beta density at x in [0, 1]. Returns +inf at an endpoint where the
/// density diverges.
double beta_pdf(const BetaShape& shape, double x);

/// Regularized incomplete beta I_x(alpha, beta).
double beta_cdf(const BetaShape& shape, double x);

/// Inverse of beta_cdf for u in (0, 1).
double beta_quantile(const BetaShape& shape, double u);

}  // namespace souq
