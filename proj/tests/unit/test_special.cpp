#include "doctest.h"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "souq/special.hpp"

using namespace souq;

TEST_CASE("log_gamma against boost") {
  for (double x = 1e-3; x < 30.0; x *= 1.07) {
    CHECK(std::abs(log_gamma(x) - boost::math::lgamma(x)) <= 1e-12);
  }
  // Large arguments: the value itself is ~1e7, so compare relatively.
  for (double x = 30.0; x < 2e6; x *= 1.9) {
    const double ref = boost::math::lgamma(x);
    CHECK(std::abs(log_gamma(x) - ref) <= 1e-14 * std::abs(ref));
  }
  CHECK(std::abs(log_gamma(1.0)) <= 1e-14);
  CHECK(std::abs(log_gamma(2.0)) <= 1e-14);
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
  CHECK_THROWS(log_gamma(0.0));
  CHECK_THROWS(log_gamma(-1.0));
}

TEST_CASE("digamma against boost") {
  CHECK(digamma(1.0) == doctest::Approx(-std::numbers::egamma).epsilon(1e-14));
  CHECK(digamma(3.0) - digamma(2.0) == doctest::Approx(0.5).epsilon(1e-14));
  for (double x = 1e-3; x < 1e5; x *= 1.13) {
    const double ref = boost::math::digamma(x);
    CHECK(std::abs(digamma(x) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
  CHECK_THROWS(digamma(0.0));
}

TEST_CASE("shape validation") {
  CHECK_THROWS(BetaShape(0.0, 1.0));
  CHECK_THROWS(BetaShape(1.0, -2.0));
  CHECK_THROWS(BetaShape(2e6, 1.0));
  CHECK_NOTHROW(BetaShape(1e6, 1e6));
}

TEST_CASE("beta pdf") {
  CHECK(beta_pdf(BetaShape(1, 1), 0.3) == doctest::Approx(1.0));
  CHECK(beta_pdf(BetaShape(2, 2), 0.5) == doctest::Approx(1.5));
  CHECK(std::isinf(beta_pdf(BetaShape(0.5, 2), 0.0)));
  CHECK(std::isinf(beta_pdf(BetaShape(2, 0.5), 1.0)));
  CHECK(beta_pdf(BetaShape(2, 3), 0.0) == 0.0);
  CHECK(beta_pdf(BetaShape(1, 3), 0.0) == doctest::Approx(3.0));
  CHECK(beta_pdf(BetaShape(2, 3), -0.1) == 0.0);
}

TEST_CASE("beta cdf against boost ibeta") {
  const double shapes[] = {0.05, 0.3, 0.5, 1.0, 2.5, 7.0, 30.0, 250.0, 4000.0};
  for (double a : shapes) {
    for (double b : shapes) {
      for (double x = 0.001; x < 1.0; x += 0.0237) {
        // The prefactor exponent grows with a + b, and so does its rounding.
        const double ref = boost::math::ibeta(a, b, x);
        CHECK(std::abs(beta_cdf(BetaShape(a, b), x) - ref) <= 1e-12 * std::max(1.0, (a + b) / 1000.0));
      }
    }
  }
  CHECK(beta_cdf(BetaShape(2, 3), 0.0) == 0.0);
  CHECK(beta_cdf(BetaShape(2, 3), 1.0) == 1.0);
  CHECK(beta_cdf(BetaShape(1, 1), 0.37) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK_THROWS_AS(beta_cdf(BetaShape(2, 3), 1.5), std::domain_error);
  CHECK_THROWS_AS(beta_cdf(BetaShape(2, 3), -0.1), std::domain_error);
}

TEST_CASE("beta quantile") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> log_shape(std::log(0.05), std::log(1e4));
  std::uniform_real_distribution<double> level(1e-9, 1.0 - 1e-9);
  for (int trial = 0; trial < 2000; ++trial) {
    const double a = std::exp(log_shape(gen));
    const double b = std::exp(log_shape(gen));
    const double u = level(gen);
    const BetaShape shape(a, b);
    const double x = beta_quantile(shape, u);
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0);
    // Near 1 the cdf can jump by more than 1e-8 between adjacent doubles,
    // so u only has to be bracketed by the cdf at the neighbours of x.
    const double below = beta_cdf(shape, std::nextafter(x, 0.0));
    const double above = beta_cdf(shape, std::nextafter(x, 1.0));
    CHECK(u >= below - 1e-8);
    CHECK(u <= above + 1e-8);
    const double ref = boost::math::ibeta_inv(a, b, u);
    CHECK(std::abs(x - ref) <= 1e-9 * std::min(x, 1.0 - x) + 4e-16);
  }
  CHECK(beta_quantile(BetaShape(1, 1), 0.25) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(beta_quantile(BetaShape(3, 3), 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(beta_quantile(BetaShape(2, 3), 0.0), std::domain_error);
  CHECK_THROWS_AS(beta_quantile(BetaShape(2, 3), 1.0), std::domain_error);
}

TEST_CASE("beta quantile below the normal range") {
  // Tiny first shape and tiny level: the quantile is far below 1e-300.
  const BetaShape shape(0.034, 3.08);
  const double x = beta_quantile(shape, 1e-12);
  CHECK(x >= 0.0);
  CHECK(x < 1e-300);
  const double y = beta_quantile(shape, 1e-3);
  CHECK(y > 0.0);
  CHECK(beta_cdf(shape, y) == doctest::Approx(1e-3).epsilon(1e-8));
}
