#include "doctest.h"

#include <cmath>
#include <set>
#include <stdexcept>

#include "souq/random.hpp"
#include "souq/second_order.hpp"

using namespace souq;

TEST_CASE("generators are reproducible per seed and stream") {
  Rng a(42);
  Rng b(42);
  Rng c(42, 1);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs = differs || x != c.next_u64();
  }
  CHECK(differs);
}

TEST_CASE("derived seeds are distinct and deterministic") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(7, s));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  CHECK(derive_seed(7, 3) != derive_seed(8, 3));
}

TEST_CASE("uniform_open and index stay in range") {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(rng.index(7) < 7);
  }
}

TEST_CASE("gamma variates have the right mean") {
  for (double shape : {0.3, 1.0, 4.5, 50.0}) {
    Rng rng(9);
    const int n = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = std::exp(rng.log_gamma_variate(shape));
      sum += g;
      sum_sq += g * g;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    // Gamma(shape, 1): mean = variance = shape.
    CHECK(std::abs(mean - shape) <= 4.0 * std::sqrt(shape / n));
    CHECK(var == doctest::Approx(shape).epsilon(0.05));
  }
}

TEST_CASE("tiny shapes keep finite logarithms") {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double lg = rng.log_gamma_variate(1e-4);
    REQUIRE(std::isfinite(lg));
  }
}

TEST_CASE("dirichlet draws lie on the simplex") {
  Rng rng(2);
  std::vector<double> p;
  std::vector<double> log_p;
  const Dirichlet q({1e-3, 0.5, 20.0});
  for (int i = 0; i < 1000; ++i) {
    draw_dirichlet(q, rng, p, log_p);
    double total = 0.0;
    for (std::size_t y = 0; y < p.size(); ++y) {
      REQUIRE(p[y] >= 0.0);
      REQUIRE(std::isfinite(log_p[y]));
      total += p[y];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}
