#pragma once

// Wasserstein-based total, aleatoric and epistemic uncertainty of a
// second-order distribution, with the trivial 0/1 ground metric on labels.
//
//   TU(Q) = 1 - max_y E_Q[p(y)]
//   AU(Q) = 1 - E_Q[max_y p(y)]
//   EU(Q) = 1/2 min_{q in simplex} E_Q ||p - q||_1
//
// All three lie in [0, (K-1)/K].

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "souq/second_order.hpp"

namespace souq {

enum class Estimator { closed_form, monte_carlo, lagrangian, brute_force, exact_pairwise };

std::string_view to_string(Estimator e);
Estimator estimator_from_string(std::string_view name);

struct EuSolverConfig {
  double lambda_tol = 1e-10;
  int max_iter = 200;
  std::size_t mc_samples = 100000;

  /// Throws std::invalid_argument on nonpositive tolerances or counts.
  void validate() const;
};

/// Estimate of a Monte-Carlo-backed quantity; stderr is zero on exact paths.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct EuResult {
  double value = 0.0;
  Categorical minimizer;
  std::optional<double> lambda_star;
  Estimator estimator = Estimator::lagrangian;
  int iterations = 0;
  /// |sum_i q_i - 1| before the minimizer was renormalized.
  double constraint_residual = 0.0;
  std::string notes;
};

struct UncertaintyReport {
  std::size_t k = 0;
  double tu = 0.0;
  double au = 0.0;
  double eu = 0.0;
  bool normalized = false;
  Estimator estimator = Estimator::closed_form;
  std::optional<double> mc_stderr;
  std::optional<Categorical> minimizer_q;
  std::optional<double> lambda_star;
  std::string notes;
};

double tu(const SecondOrder& q);

/// 1 - max_y E[p(y)] over the labels of a restriction, on the unrenormalized
/// sub-probability mean.
double tu(const Restricted& q);

/// Exact for ensembles. For a Dirichlet, a Monte-Carlo mean of
/// 1 - max_y p(y) over cfg.mc_samples draws seeded with `seed`, projected
/// onto [0, TU(Q)].
Estimate au(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed);

EuResult eu(const SecondOrder& q, const EuSolverConfig& cfg);

/// Solves the Lagrangian stationarity system F_i(q_i) = 1/2 - lambda with
/// F_i the Beta(alpha_i, alpha0 - alpha_i) cdf, bisecting lambda until the
/// quantile vector sums to one. Throws ConvergenceError if the bracket
/// fails or max_iter is exhausted.
EuResult eu_dirichlet(const Dirichlet& q, const EuSolverConfig& cfg);

/// h(q) = 1/2 sum_i E|p_i - q_i| under Dir(alpha), in closed form through
/// Beta cdfs.
double eu_objective_dirichlet(const Dirichlet& q, std::span<const double> point);

/// h(q) = 1/2 sum_m w_m ||p_m - q||_1.
double eu_objective_ensemble(const Ensemble& q, std::span<const double> point);

/// Exact minimizer for a finite ensemble. The optimal set is the product of
/// weighted-median intervals at the optimal quantile level intersected with
/// the constraint plane; the reported point is the ensemble mean projected
/// onto that set.
EuResult eu_ensemble(const Ensemble& q, const EuSolverConfig& cfg);

struct OracleResult {
  double value = 0.0;
  Categorical minimizer;
  /// Standard error of the objective at the minimizer (Dirichlet only).
  double std_error = 0.0;
};

/// Exhaustive search over the simplex lattice with spacing grid_step.
/// Dirichlet objectives are Monte-Carlo estimates with one common sample
/// set (cfg.mc_samples draws from `seed`). Requires K <= 4.
OracleResult eu_bruteforce_oracle(const SecondOrder& q, double grid_step,
                                  const EuSolverConfig& cfg, std::uint64_t seed);

UncertaintyReport measure(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed);

/// Scales TU, AU, EU (and the stderr) by K/(K-1). Throws std::logic_error
/// on an already-normalized report.
UncertaintyReport normalize(const UncertaintyReport& report, std::size_t k);

}  // namespace souq
