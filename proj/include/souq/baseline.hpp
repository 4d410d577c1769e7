#pragma once

// Entropy-based uncertainty measures and the cross-entropy variant, kept
// for comparison with the distance-based measures. Values are in bits and
// may be kInfinity where the cross-entropy terms diverge.

#include <cstdint>
#include <optional>
#include <string_view>

#include "souq/distance.hpp"

namespace souq {

enum class BaselineFamily { entropy_default, cross_entropy_alt };

std::string_view to_string(BaselineFamily f);

struct BaselineReport {
  BaselineFamily family = BaselineFamily::entropy_default;
  std::size_t k = 0;
  double tu = 0.0;
  double au = 0.0;
  double eu = 0.0;
  Estimator estimator = Estimator::closed_form;
  std::optional<double> mc_stderr;
};

struct KlReframed {
  Estimate tu;
  Estimate au;
  Estimate eu;
};

/// H(E_Q[p]).
double entropy_tu(const SecondOrder& q);

/// E_Q[H(p)]: exact for ensembles, digamma closed form for a Dirichlet.
Estimate entropy_au(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed);

/// Monte-Carlo E_Q[H(p)] (a Dirichlet check on the closed form).
Estimate entropy_au_monte_carlo(const Dirichlet& q, std::size_t samples, std::uint64_t seed);

/// Mutual information E_Q[KL(p || mean)]: exact for ensembles, Monte Carlo
/// for a Dirichlet.
Estimate entropy_eu(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed);

/// The same three quantities written as divergences from the uniform
/// distribution: log K - KL(mean || unif), log K - E KL(p || unif),
/// E KL(p || mean).
KlReframed kl_reframed(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed);

/// E over independent p, p' ~ Q of CE(p, p').
Estimate ce_tu(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed);

/// E over independent p, p' ~ Q of KL(p || p').
Estimate ce_eu(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed);

BaselineReport entropy_report(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed);
BaselineReport cross_entropy_report(const SecondOrder& q, const EuSolverConfig& cfg,
                                    std::uint64_t seed);

/// Restricted variants used by the subadditivity and product checks; they
/// evaluate the same formulas on sub-probability vectors.
double entropy_tu(const Restricted& q);
Estimate ce_tu(const Restricted& q, const EuSolverConfig& cfg, std::uint64_t seed);

}  // namespace souq
