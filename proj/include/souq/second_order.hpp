#pragma once

// Second-order distributions: distributions over the probability simplex,
// either a Dirichlet law or a finite weighted ensemble of first-order
// distributions.

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "souq/random.hpp"
#include "souq/simplex.hpp"
#include "souq/special.hpp"

namespace souq {

/// Concentrations below this are rejected as degenerate.
inline constexpr double kMinConcentration = 1e-8;

/// Dir(alpha) with every alpha_i in [kMinConcentration, ...) and
/// alpha0 = sum alpha_i <= kMaxBetaShape.
class Dirichlet {
 public:
  explicit Dirichlet(std::vector<double> alpha);

  std::size_t size() const noexcept { return alpha_.size(); }
  std::span<const double> alpha() const noexcept { return alpha_; }
  double alpha0() const noexcept { return alpha0_; }

  friend bool operator==(const Dirichlet&, const Dirichlet&) = default;

 private:
  std::vector<double> alpha_;
  double alpha0_;
};

/// Finite mixture of point masses at first-order distributions.
class Ensemble {
 public:
  /// Uniform weights.
  explicit Ensemble(std::vector<Categorical> atoms);
  Ensemble(std::vector<Categorical> atoms, std::vector<double> weights);

  /// Number of labels K.
  std::size_t size() const noexcept { return atoms_.front().size(); }
  /// Number of atoms M.
  std::size_t count() const noexcept { return atoms_.size(); }
  const std::vector<Categorical>& atoms() const noexcept { return atoms_; }
  std::span<const double> weights() const noexcept { return weights_; }

  friend bool operator==(const Ensemble&, const Ensemble&) = default;

 private:
  std::vector<Categorical> atoms_;
  std::vector<double> weights_;
};

using SecondOrder = std::variant<Dirichlet, Ensemble>;

std::size_t label_count(const SecondOrder& q);

/// Point mass at a single first-order distribution.
Ensemble second_order_dirac(const Categorical& p);

/// Mass 1/K on every one-hot distribution.
Ensemble vertex_uniform(LabelSpace space);

Categorical mean(const Dirichlet& q);
Categorical mean(const Ensemble& q);
Categorical mean(const SecondOrder& q);

/// One Dirichlet draw written into p, with log(p) alongside so that
/// coordinates which underflow to zero keep a finite logarithm.
void draw_dirichlet(const Dirichlet& q, Rng& rng, std::vector<double>& p,
                    std::vector<double>& log_p);

std::vector<Categorical> sample(const SecondOrder& q, std::size_t n, Rng& rng);
std::vector<Categorical> sample(const SecondOrder& q, std::size_t n, std::uint64_t seed);

/// Marginal law of coordinate i: Beta(alpha_i, alpha0 - alpha_i).
BetaShape marginal_beta(const Dirichlet& q, std::size_t i);

/// Marginal law of a Dirichlet on a block of labels: the sub-vector of
/// concentrations together with the full alpha0.
struct DirichletBlock {
  std::vector<double> alpha;
  double alpha0;

  friend bool operator==(const DirichletBlock&, const DirichletBlock&) = default;
};

/// Ensemble whose atoms are sub-probability vectors (coordinates selected
/// from full distributions without renormalization).
struct SubEnsemble {
  std::vector<std::vector<double>> atoms;
  std::vector<double> weights;

  friend bool operator==(const SubEnsemble&, const SubEnsemble&) = default;
};

/// A second-order distribution marginalized onto a subset of labels.
/// Only the subadditivity and product checks consume these.
class Restricted {
 public:
  using Body = std::variant<DirichletBlock, SubEnsemble>;

  Restricted(std::vector<std::size_t> labels, Body body);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  const Body& body() const noexcept { return body_; }

 private:
  std::vector<std::size_t> labels_;
  Body body_;
};

/// Coordinate restriction to `subset` (a nonempty strict subset of labels),
/// without renormalization. Throws std::invalid_argument otherwise.
Restricted restrict_labels(const SecondOrder& q, std::span<const std::size_t> subset);

/// Expected sub-probability vector of a restriction.
std::vector<double> mean(const Restricted& q);

/// Independent coupling of two ensemble-backed restrictions on disjoint
/// label blocks; coordinates are concatenated in (first, second) order.
Restricted product(const Restricted& first, const Restricted& second);

/// Splits every atom p into p + eps*d and p - eps*d with half its weight,
/// d a random zero-sum unit direction on the support of p, and eps the
/// smaller of `magnitude` and the largest step keeping both offspring in
/// the simplex. The mean is unchanged.
Ensemble mean_preserving_spread(const Ensemble& q, double magnitude, Rng& rng);
Ensemble mean_preserving_spread(const Ensemble& q, double magnitude, std::uint64_t seed);

/// Same split with one caller-provided zero-sum direction per atom.
Ensemble mean_preserving_spread(const Ensemble& q, double magnitude,
                                std::span<const std::vector<double>> directions);

/// Translates every atom by z (sum z = 0). Throws std::invalid_argument
/// naming the first atom that would leave the simplex.
Ensemble spread_preserving_shift(const Ensemble& q, std::span<const double> z);

}  // namespace souq
