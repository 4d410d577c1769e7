#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "souq/simplex.hpp"

using namespace souq;

namespace {

// Kantorovich dual under the 0/1 metric: potentials range over {0, 1}^K, so
// the distance is the largest mass difference over label subsets.
double tv_dual_oracle(const std::vector<double>& p, const std::vector<double>& q) {
  const std::size_t k = p.size();
  double best = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    double v = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::size_t{1} << i)) v += p[i] - q[i];
    }
    best = std::max(best, v);
  }
  return best;
}

std::vector<double> random_simplex_point(std::size_t k, std::mt19937_64& gen) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(k);
  double total = 0.0;
  for (double& v : p) total += (v = e(gen));
  for (double& v : p) v /= total;
  return p;
}

}  // namespace

TEST_CASE("label space needs at least two labels") {
  CHECK_THROWS_AS(LabelSpace(1), std::invalid_argument);
  CHECK_THROWS_AS(LabelSpace(0), std::invalid_argument);
  CHECK(LabelSpace(2).size() == 2);
}

TEST_CASE("categorical validation") {
  CHECK_THROWS_AS(Categorical({0.5, 0.6, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(Categorical({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Categorical({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Categorical({0.5, std::nan("")}), std::invalid_argument);

  const Categorical p({0.5, 0.5 + 5e-10});
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-15));

  const Categorical clipped({-1e-13, 1.0});
  CHECK(clipped[0] == 0.0);
  CHECK(clipped[1] == 1.0);
}

TEST_CASE("dirac and uniform") {
  const Categorical d = dirac_first_order(2, LabelSpace(4));
  CHECK(d.vec() == std::vector<double>{0, 0, 1, 0});
  CHECK_THROWS_AS(dirac_first_order(4, LabelSpace(4)), std::out_of_range);
  const Categorical u = uniform_first_order(LabelSpace(4));
  for (double v : u.probs()) CHECK(v == 0.25);
}

TEST_CASE("total variation anchor") {
  const Categorical p({0.5, 0.3, 0.2});
  const Categorical q({0.2, 0.3, 0.5});
  CHECK(tv_distance(p, q) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(tv_distance_by_coupling(p, q) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(tv_dual_oracle(p.vec(), q.vec()) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(tv_distance(p, p) == 0.0);
  CHECK(tv_distance(dirac_first_order(0, LabelSpace(3)), dirac_first_order(1, LabelSpace(3))) == 1.0);
  CHECK_THROWS_AS(tv_distance(p, uniform_first_order(LabelSpace(4))), std::invalid_argument);
}

TEST_CASE("total variation matches the transport dual on random pairs") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + trial % 6;
    const auto a = random_simplex_point(k, gen);
    const auto b = random_simplex_point(k, gen);
    const Categorical p(a);
    const Categorical q(b);
    const double oracle = tv_dual_oracle(p.vec(), q.vec());
    CHECK(std::abs(tv_distance(p, q) - oracle) <= 1e-14);
    CHECK(std::abs(tv_distance_by_coupling(p, q) - oracle) <= 1e-14);
    CHECK(std::abs(tv_distance(p, q) - tv_distance(q, p)) <= 1e-15);
  }
}

TEST_CASE("entropy, divergence and cross-entropy") {
  CHECK(entropy(uniform_first_order(LabelSpace(4))) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(entropy(dirac_first_order(1, LabelSpace(3))) == 0.0);
  const Categorical p({0.75, 0.25});
  const Categorical q({0.25, 0.75});
  // 0.75 log2 3 - 0.25 log2 3 = 0.5 log2 3
  CHECK(kl_divergence(p, q) == doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-14));
  CHECK(kl_divergence(p, p) == 0.0);
  CHECK(cross_entropy(p, p) == doctest::Approx(entropy(p)).epsilon(1e-15));

  const Categorical one_hot = dirac_first_order(0, LabelSpace(2));
  const Categorical other = dirac_first_order(1, LabelSpace(2));
  CHECK(std::isinf(kl_divergence(one_hot, other)));
  CHECK(std::isinf(cross_entropy(one_hot, other)));
  CHECK(kl_divergence(one_hot, p) == doctest::Approx(-std::log2(0.75)));

  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Categorical a(random_simplex_point(4, gen));
    const Categorical b(random_simplex_point(4, gen));
    CHECK(cross_entropy(a, b) == doctest::Approx(entropy(a) + kl_divergence(a, b)).epsilon(1e-12));
    CHECK(kl_divergence(a, b) >= 0.0);
  }
}
