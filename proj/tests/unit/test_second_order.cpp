#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "souq/second_order.hpp"

using namespace souq;

TEST_CASE("dirichlet validation") {
  CHECK_THROWS_AS(Dirichlet({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Dirichlet({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Dirichlet({1.0, 1e-9}), std::invalid_argument);
  CHECK_THROWS_AS(Dirichlet({6e5, 6e5}), std::invalid_argument);
  CHECK_THROWS_AS(Dirichlet({1.0, std::nan("")}), std::invalid_argument);
  const Dirichlet d({1.0, 2.0, 3.0});
  CHECK(d.alpha0() == 6.0);
  CHECK(d.size() == 3);
}

TEST_CASE("ensemble validation") {
  const Categorical a({0.2, 0.8});
  const Categorical b({0.6, 0.4});
  CHECK_THROWS_AS(Ensemble({}), std::invalid_argument);
  CHECK_THROWS_AS(Ensemble({a, b}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Ensemble({a, b}, {1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Ensemble({a, b}, {0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Ensemble({a, Categorical({0.2, 0.3, 0.5})}), std::invalid_argument);
  const Ensemble e({a, b});
  CHECK(e.weights()[0] == 0.5);
  CHECK(e.count() == 2);
  CHECK(e.size() == 2);
}

TEST_CASE("means") {
  const Dirichlet d({1.0, 3.0});
  CHECK(mean(d)[0] == doctest::Approx(0.25));
  const Ensemble e({Categorical({0.2, 0.8}), Categorical({0.6, 0.4})}, {0.25, 0.75});
  CHECK(mean(e)[0] == doctest::Approx(0.5));
  CHECK(mean(SecondOrder(e)) == mean(e));
  CHECK(label_count(SecondOrder(d)) == 2);
}

TEST_CASE("sample means converge") {
  const Dirichlet d({2.0, 3.0, 5.0});
  const auto draws = sample(SecondOrder(d), 100000, 17);
  for (std::size_t y = 0; y < 3; ++y) {
    double sum = 0.0;
    for (const auto& p : draws) sum += p[y];
    const double m = d.alpha()[y] / d.alpha0();
    const double var = m * (1.0 - m) / (d.alpha0() + 1.0);
    CHECK(std::abs(sum / draws.size() - m) <= 4.0 * std::sqrt(var / draws.size()));
  }
  const Ensemble e({Categorical({0.2, 0.8}), Categorical({0.6, 0.4})}, {0.25, 0.75});
  const auto atoms = sample(SecondOrder(e), 40000, 3);
  double first = 0.0;
  for (const auto& p : atoms) first += p[0] == 0.2 ? 1.0 : 0.0;
  CHECK(std::abs(first / atoms.size() - 0.25) <= 4.0 * std::sqrt(0.25 * 0.75 / atoms.size()));
  CHECK(sample(SecondOrder(d), 10, 5) == sample(SecondOrder(d), 10, 5));
}

TEST_CASE("marginal beta") {
  const BetaShape s = marginal_beta(Dirichlet({1.0, 2.0, 3.0}), 1);
  CHECK(s.alpha() == 2.0);
  CHECK(s.beta() == 4.0);
}

TEST_CASE("dirac constructions") {
  const Ensemble v = vertex_uniform(LabelSpace(3));
  CHECK(v.count() == 3);
  CHECK(mean(v) == uniform_first_order(LabelSpace(3)));
  const Ensemble d = second_order_dirac(Categorical({0.1, 0.9}));
  CHECK(d.count() == 1);
  CHECK(d.weights()[0] == 1.0);
}

TEST_CASE("restriction without renormalization") {
  const Ensemble e({Categorical({0.2, 0.3, 0.5}), Categorical({0.6, 0.1, 0.3})});
  const std::size_t block[] = {0, 2};
  const Restricted r = restrict_labels(SecondOrder(e), block);
  const auto& sub = std::get<SubEnsemble>(r.body());
  CHECK(sub.atoms[0] == std::vector<double>{0.2, 0.5});
  CHECK(sub.atoms[1] == std::vector<double>{0.6, 0.3});
  const auto m = mean(r);
  CHECK(m[0] == doctest::Approx(0.4));
  CHECK(m[1] == doctest::Approx(0.4));

  const std::size_t single[] = {1};
  const Restricted rd = restrict_labels(SecondOrder(Dirichlet({1.0, 2.0, 3.0})), single);
  const auto& blk = std::get<DirichletBlock>(rd.body());
  CHECK(blk.alpha == std::vector<double>{2.0});
  CHECK(blk.alpha0 == 6.0);
  CHECK(mean(rd)[0] == doctest::Approx(1.0 / 3.0));

  const std::size_t empty[] = {0};
  const std::size_t full[] = {0, 1, 2};
  const std::size_t dup[] = {0, 0};
  const std::size_t out[] = {3};
  CHECK_THROWS_AS(restrict_labels(SecondOrder(e), std::span<const std::size_t>(empty, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(restrict_labels(SecondOrder(e), full), std::invalid_argument);
  CHECK_THROWS_AS(restrict_labels(SecondOrder(e), dup), std::invalid_argument);
  CHECK_THROWS_AS(restrict_labels(SecondOrder(e), out), std::invalid_argument);
}

TEST_CASE("product of restrictions") {
  const Ensemble e({Categorical({0.2, 0.3, 0.5}), Categorical({0.6, 0.1, 0.3})}, {0.25, 0.75});
  const std::size_t first[] = {1};
  const std::size_t second[] = {0, 2};
  const Restricted a = restrict_labels(SecondOrder(e), first);
  const Restricted b = restrict_labels(SecondOrder(e), second);
  const Restricted p = product(a, b);
  CHECK(p.labels() == std::vector<std::size_t>{1, 0, 2});
  const auto& joint = std::get<SubEnsemble>(p.body());
  CHECK(joint.atoms.size() == 4);
  CHECK(joint.weights[1] == doctest::Approx(0.25 * 0.75));
  CHECK(joint.atoms[1] == std::vector<double>{0.3, 0.6, 0.3});
  const auto m = mean(p);
  const auto ma = mean(a);
  const auto mb = mean(b);
  CHECK(m[0] == doctest::Approx(ma[0]));
  CHECK(m[1] == doctest::Approx(mb[0]));
  CHECK(m[2] == doctest::Approx(mb[1]));

  CHECK_THROWS_AS(product(a, a), std::invalid_argument);
  const Restricted d = restrict_labels(SecondOrder(Dirichlet({1.0, 1.0, 1.0})), first);
  CHECK_THROWS_AS(product(d, b), std::invalid_argument);
}

TEST_CASE("mean-preserving spread") {
  const Ensemble e({Categorical({0.2, 0.3, 0.5}), Categorical({0.0, 0.1, 0.9}), Categorical({1.0, 0.0, 0.0})},
                   {0.5, 0.3, 0.2});
  const Ensemble s = mean_preserving_spread(e, 0.1, 7);
  CHECK(s.count() == 6);
  for (std::size_t y = 0; y < 3; ++y) CHECK(mean(s)[y] == doctest::Approx(mean(e)[y]).epsilon(1e-14));
  CHECK(s == mean_preserving_spread(e, 0.1, 7));
  // The one-hot atom has no room to spread; both offspring equal the parent.
  CHECK(s.atoms()[4] == e.atoms()[2]);
  CHECK(s.atoms()[5] == e.atoms()[2]);
  // Zero coordinates stay zero.
  CHECK(s.atoms()[2][0] == 0.0);
  CHECK_THROWS_AS(mean_preserving_spread(e, 0.0, 7), std::invalid_argument);

  const std::vector<std::vector<double>> dirs = {{1.0, -1.0, 0.0}, {0.0, 1.0, -1.0}, {0.0, 0.0, 0.0}};
  const Ensemble t = mean_preserving_spread(e, 0.05, dirs);
  CHECK(t.atoms()[0][0] == doctest::Approx(0.25));
  CHECK(t.atoms()[1][0] == doctest::Approx(0.15));
  CHECK(t.weights()[0] == doctest::Approx(0.25));
  const std::vector<std::vector<double>> bad = {{1.0, 0.0, 0.0}, {0.0, 1.0, -1.0}, {0.0, 0.0, 0.0}};
  CHECK_THROWS_AS(mean_preserving_spread(e, 0.05, bad), std::invalid_argument);
}

TEST_CASE("spread-preserving shift") {
  const Ensemble e({Categorical({0.9, 0.1}), Categorical({0.3, 0.7})});
  const std::vector<double> z = {-0.1, 0.1};
  const Ensemble s = spread_preserving_shift(e, z);
  CHECK(s.atoms()[0][0] == doctest::Approx(0.8));
  CHECK(s.atoms()[1][0] == doctest::Approx(0.2));
  CHECK(mean(s)[0] == doctest::Approx(mean(e)[0] - 0.1));
  const std::vector<double> too_far = {-0.4, 0.4};
  CHECK_THROWS_WITH_AS(spread_preserving_shift(e, too_far), doctest::Contains("atom 1"), std::invalid_argument);
  const std::vector<double> not_zero_sum = {0.1, 0.1};
  CHECK_THROWS_AS(spread_preserving_shift(e, not_zero_sum), std::invalid_argument);
}
