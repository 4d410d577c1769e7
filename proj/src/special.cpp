#include "souq/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace souq {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
const double kLogMinNormal = std::log(std::numeric_limits<double>::min());
constexpr int kMaxFractionTerms = 20000;
constexpr int kMaxQuantileIterations = 200;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error(std::string(what) + ": argument must be positive and finite, got " +
                            std::to_string(x));
  }
}

// Stirling series for ln Gamma(z), accurate to double precision for z >= 15.
double stirling_log_gamma(double z) {
  constexpr double half_log_two_pi = 0.91893853320467274178;
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12.0 -
             inv2 * (1.0 / 360.0 -
                     inv2 * (1.0 / 1260.0 -
                             inv2 * (1.0 / 1680.0 -
                                     inv2 * (1.0 / 1188.0 -
                                             inv2 * (691.0 / 360360.0 -
                                                     inv2 * (1.0 / 156.0 - inv2 * 3617.0 / 122400.0)))))));
  return (z - 0.5) * std::log(z) - z + half_log_two_pi + series;
}

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double incomplete_beta_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge for a=" +
                         std::to_string(a) + ", b=" + std::to_string(b) +
                         ", x=" + std::to_string(x));
}

// Starting point for the quantile iteration: a normal approximation with
// matched moments when both shapes are >= 1, power-law tails otherwise.
double quantile_initial_guess(double a, double b, double u) {
  double x;
  if (a >= 1.0 && b >= 1.0) {
    const double pp = u < 0.5 ? u : 1.0 - u;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (u < 0.5) z = -z;
    const double al = (z * z - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
    const double w = z * std::sqrt(al + h) / h -
                     (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
    x = a / (a + b * std::exp(2.0 * w));
  } else {
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double v = std::exp(b * lnb) / b;
    const double w = t + v;
    if (u < t / w) {
      x = std::pow(a * w * u, 1.0 / a);
    } else {
      x = 1.0 - std::pow(b * w * (1.0 - u), 1.0 / b);
    }
  }
  if (!(x > 0.0)) x = kEps * 0.5;
  if (!(x < 1.0)) x = 1.0 - kEps;
  return x;
}

double bracket_midpoint(double lo, double hi) {
  if (hi <= 0.5) {
    if (lo <= 0.0) return hi * 0.0625;
    if (hi > 16.0 * lo) return std::sqrt(lo * hi);
  } else if (lo >= 0.5) {
    const double clo = 1.0 - lo;
    const double chi = 1.0 - hi;
    if (chi <= 0.0) return 1.0 - clo * 0.0625;
    if (clo > 16.0 * chi) return 1.0 - std::sqrt(clo * chi);
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BetaShape::BetaShape(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  require_positive(alpha, "BetaShape alpha");
  require_positive(beta, "BetaShape beta");
  if (alpha > kMaxBetaShape || beta > kMaxBetaShape) {
    throw std::domain_error("Beta shape above supported maximum 1e6: (" +
                            std::to_string(alpha) + ", " + std::to_string(beta) + ")");
  }
}

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  if (x >= 15.0) return stirling_log_gamma(x);
  double product = 1.0;
  double z = x;
  while (z < 15.0) {
    product *= z;
    z += 1.0;
  }
  return stirling_log_gamma(z) - std::log(product);
}

double digamma(double x) {
  require_positive(x, "digamma");
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double f = 1.0 / (x * x);
  const double tail =
      f * (1.0 / 12.0 -
           f * (1.0 / 120.0 -
                f * (1.0 / 252.0 -
                     f * (1.0 / 240.0 - f * (1.0 / 132.0 - f * (691.0 / 32760.0 - f / 12.0))))));
  return result + std::log(x) - 0.5 / x - tail;
}

double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta_pdf(const BetaShape& shape, double x) {
  const double a = shape.alpha();
  const double b = shape.beta();
  if (x < 0.0 || x > 1.0) return 0.0;
  if (x == 0.0) {
    if (a < 1.0) return std::numeric_limits<double>::infinity();
    return a == 1.0 ? std::exp(-log_beta(a, b)) : 0.0;
  }
  if (x == 1.0) {
    if (b < 1.0) return std::numeric_limits<double>::infinity();
    return b == 1.0 ? std::exp(-log_beta(a, b)) : 0.0;
  }
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b));
}

double beta_cdf(const BetaShape& shape, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("beta_cdf: x must lie in [0, 1], got " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double a = shape.alpha();
  const double b = shape.beta();
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  double value;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    value = front * incomplete_beta_fraction(a, b, x) / a;
  } else {
    value = 1.0 - front * incomplete_beta_fraction(b, a, 1.0 - x) / b;
  }
  return std::clamp(value, 0.0, 1.0);
}

double beta_quantile(const BetaShape& shape, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("beta_quantile: u must lie in (0, 1), got " + std::to_string(u));
  }
  const double a = shape.alpha();
  const double b = shape.beta();
  // Lower tail F(x) ~ x^a / (a B(a, b)); below the normal range that
  // leading term is exact to working precision.
  const double log_tail = (std::log(u) + std::log(a) + log_beta(a, b)) / a;
  if (log_tail < kLogMinNormal) return std::exp(log_tail);
  double lo = 0.0;
  double hi = 1.0;
  double x = quantile_initial_guess(a, b, u);
  double best_x = x;
  double best_residual = std::numeric_limits<double>::infinity();

  for (int it = 0; it < kMaxQuantileIterations; ++it) {
    const double residual = beta_cdf(shape, x) - u;
    if (std::abs(residual) < best_residual) {
      best_residual = std::abs(residual);
      best_x = x;
    }
    if (residual == 0.0) return x;
    if (residual < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 4.0 * kEps * std::min(hi, 1.0 - lo) || hi - lo <= kTiny) break;

    const double density = beta_pdf(shape, x);
    double next = std::numeric_limits<double>::quiet_NaN();
    if (density > 0.0 && std::isfinite(density)) next = x - residual / density;
    if (!(next > lo && next < hi)) next = bracket_midpoint(lo, hi);
    if (std::abs(next - x) <= 2.0 * kEps * std::min(x, 1.0 - x)) {
      x = next;
      const double r = std::abs(beta_cdf(shape, x) - u);
      if (r < best_residual) {
        best_residual = r;
        best_x = x;
      }
      break;
    }
    x = next;
    if (it + 1 == kMaxQuantileIterations) {
      throw ConvergenceError("beta_quantile: no convergence after 200 iterations for a=" +
                             std::to_string(a) + ", b=" + std::to_string(b) +
                             ", u=" + std::to_string(u));
    }
  }
  // Near 0 or 1 the bracket can stall a few ulps away from the best double.
  for (double dir : {0.0, 1.0}) {
    for (double y = std::nextafter(best_x, dir);; y = std::nextafter(y, dir)) {
      const double r = std::abs(beta_cdf(shape, y) - u);
      if (!(r < best_residual)) break;
      best_residual = r;
      best_x = y;
      if (y == dir) break;
    }
  }
  return best_x;
}

}  // namespace souq
