#include "souq/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace souq {

namespace {

// Quantile levels closer than this are treated as equal when matching the
// weighted-median intervals of different coordinates.
constexpr double kLevelTolerance = 1e-12;
constexpr double kEndpointGap = 1e-12;

// Weighted empirical distribution of one coordinate across the atoms.
struct CoordinateLaw {
  std::vector<double> values;      // distinct atom values, ascending
  std::vector<double> cumulative;  // weight of atoms <= values[k]

  // Smallest x with F(x) >= level.
  double lower(double level) const {
    if (level <= kLevelTolerance) return 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (cumulative[k] >= level - kLevelTolerance) return values[k];
    }
    return values.back();
  }

  // Largest x with F(x-) <= level.
  double upper(double level) const {
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (cumulative[k] > level + kLevelTolerance) return values[k];
    }
    return 1.0;
  }
};

std::vector<CoordinateLaw> coordinate_laws(const Ensemble& q) {
  std::vector<CoordinateLaw> laws(q.size());
  std::vector<std::pair<double, double>> column;
  for (std::size_t i = 0; i < q.size(); ++i) {
    column.clear();
    for (std::size_t a = 0; a < q.count(); ++a) {
      if (q.weights()[a] > 0.0) column.emplace_back(q.atoms()[a][i], q.weights()[a]);
    }
    std::sort(column.begin(), column.end());
    double running = 0.0;
    for (const auto& [value, weight] : column) {
      running += weight;
      auto& law = laws[i];
      if (!law.values.empty() && law.values.back() == value) {
        law.cumulative.back() = running;
      } else {
        law.values.push_back(value);
        law.cumulative.push_back(running);
      }
    }
  }
  return laws;
}

// Largest offset nu with sum_i clamp(center_i + nu, lo_i, hi_i) = 1, found
// by bisection on the monotone left-hand side.
std::vector<double> project_onto_box_plane(std::span<const double> center,
                                           std::span<const double> lo,
                                           std::span<const double> hi) {
  auto fill = [&](double nu, std::vector<double>& out) {
    double total = 0.0;
    for (std::size_t i = 0; i < center.size(); ++i) {
      out[i] = std::clamp(center[i] + nu, lo[i], hi[i]);
      total += out[i];
    }
    return total;
  };
  std::vector<double> point(center.size());
  double nu_lo = -1.0;
  double nu_hi = 1.0;
  for (int it = 0; it < 200 && nu_hi - nu_lo > 1e-17; ++it) {
    const double mid = 0.5 * (nu_lo + nu_hi);
    if (fill(mid, point) < 1.0) {
      nu_lo = mid;
    } else {
      nu_hi = mid;
    }
  }
  fill(0.5 * (nu_lo + nu_hi), point);
  return point;
}

// Composition enumeration over the lattice {k / n : sum k = n} with
// separable costs table[i][k]. Returns the best composition.
void search_lattice(const std::vector<std::vector<double>>& table, std::size_t n,
                    std::vector<std::size_t>& best, double& best_value) {
  const std::size_t k = table.size();
  std::vector<std::size_t> current(k, 0);
  best_value = std::numeric_limits<double>::infinity();
  auto recurse = [&](auto&& self, std::size_t coord, std::size_t remaining, double partial) -> void {
    if (coord + 1 == k) {
      const double total = partial + table[coord][remaining];
      if (total < best_value) {
        best_value = total;
        current[coord] = remaining;
        best = current;
      }
      return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
      current[coord] = c;
      self(self, coord + 1, remaining - c, partial + table[coord][c]);
    }
  };
  recurse(recurse, 0, n, 0.0);
}

}  // namespace

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::closed_form: return "closed_form";
    case Estimator::monte_carlo: return "monte_carlo";
    case Estimator::lagrangian: return "lagrangian";
    case Estimator::brute_force: return "brute_force";
    case Estimator::exact_pairwise: return "exact_pairwise";
  }
  return "unknown";
}

Estimator estimator_from_string(std::string_view name) {
  for (auto e : {Estimator::closed_form, Estimator::monte_carlo, Estimator::lagrangian,
                 Estimator::brute_force, Estimator::exact_pairwise}) {
    if (to_string(e) == name) return e;
  }
  throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

void EuSolverConfig::validate() const {
  if (!(lambda_tol > 0.0)) throw std::invalid_argument("lambda_tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (mc_samples < 2) throw std::invalid_argument("mc_samples must be at least 2");
}

double tu(const SecondOrder& q) {
  const Categorical m = mean(q);
  return std::max(0.0, 1.0 - *std::max_element(m.probs().begin(), m.probs().end()));
}

double tu(const Restricted& q) {
  const std::vector<double> m = mean(q);
  return 1.0 - *std::max_element(m.begin(), m.end());
}

Estimate au(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed) {
  if (const auto* ens = std::get_if<Ensemble>(&q)) {
    double expected_max = 0.0;
    for (std::size_t a = 0; a < ens->count(); ++a) {
      const auto probs = ens->atoms()[a].probs();
      expected_max += ens->weights()[a] * *std::max_element(probs.begin(), probs.end());
    }
    return {std::max(0.0, 1.0 - expected_max), 0.0};
  }
  cfg.validate();
  const auto& dir = std::get<Dirichlet>(q);
  Rng rng(seed);
  std::vector<double> p;
  std::vector<double> log_p;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < cfg.mc_samples; ++s) {
    draw_dirichlet(dir, rng, p, log_p);
    const double v = 1.0 - *std::max_element(p.begin(), p.end());
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(cfg.mc_samples);
  const double avg = sum / n;
  const double var = std::max(0.0, (sum_sq - n * avg * avg) / (n - 1.0));
  // AU <= TU holds exactly (Jensen), so the estimate is projected onto it.
  return {std::clamp(avg, 0.0, tu(q)), std::sqrt(var / n)};
}

double eu_objective_dirichlet(const Dirichlet& q, std::span<const double> point) {
  if (point.size() != q.size()) throw std::invalid_argument("objective point has wrong length");
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double a = q.alpha()[i];
    const double b = q.alpha0() - a;
    const double x = std::clamp(point[i], 0.0, 1.0);
    const double cdf = beta_cdf(BetaShape(a, b), x);
    const double shifted_cdf = beta_cdf(BetaShape(a + 1.0, b), x);
    total += (a / q.alpha0()) * (1.0 - 2.0 * shifted_cdf) + x * (2.0 * cdf - 1.0);
  }
  return 0.5 * total;
}

double eu_objective_ensemble(const Ensemble& q, std::span<const double> point) {
  if (point.size() != q.size()) throw std::invalid_argument("objective point has wrong length");
  double total = 0.0;
  for (std::size_t a = 0; a < q.count(); ++a) {
    double l1 = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) l1 += std::abs(q.atoms()[a][i] - point[i]);
    total += q.weights()[a] * l1;
  }
  return 0.5 * total;
}

EuResult eu_dirichlet(const Dirichlet& q, const EuSolverConfig& cfg) {
  cfg.validate();
  const std::size_t k = q.size();
  std::vector<BetaShape> marginals;
  marginals.reserve(k);
  for (std::size_t i = 0; i < k; ++i) marginals.push_back(marginal_beta(q, i));

  std::vector<double> point(k);
  auto quantile_sum = [&](double level) {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      point[i] = beta_quantile(marginals[i], level);
      total += point[i];
    }
    return total;
  };

  // Bisection on lambda in (-1/2, 1/2); the quantile level 1/2 - lambda is
  // what the stationarity condition fixes, and the quantile sum is strictly
  // decreasing in lambda.
  double lambda_lo = -0.5 + kEndpointGap;
  double lambda_hi = 0.5 - kEndpointGap;
  if (quantile_sum(0.5 - lambda_lo) < 1.0 || quantile_sum(0.5 - lambda_hi) > 1.0) {
    throw ConvergenceError("eu_dirichlet: quantile sum does not bracket 1 on the lambda interval");
  }
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    lambda = 0.5 * (lambda_lo + lambda_hi);
    residual = quantile_sum(0.5 - lambda) - 1.0;
    if (std::abs(residual) <= cfg.lambda_tol) break;
    if (residual > 0.0) {
      lambda_lo = lambda;
    } else {
      lambda_hi = lambda;
    }
    if (lambda_hi - lambda_lo <= 0.0) break;
  }
  if (!(std::abs(residual) <= cfg.lambda_tol)) {
    throw ConvergenceError("eu_dirichlet: no convergence after " + std::to_string(it) +
                           " iterations, residual " + std::to_string(residual));
  }
  const double value = eu_objective_dirichlet(q, point);
  for (double& v : point) v /= 1.0 + residual;
  return EuResult{std::max(0.0, value), Categorical(point), lambda, Estimator::lagrangian,
                  it + 1, std::abs(residual), ""};
}

EuResult eu_ensemble(const Ensemble& q, const EuSolverConfig& cfg) {
  cfg.validate();
  const std::size_t k = q.size();
  const auto laws = coordinate_laws(q);

  std::vector<double> levels{0.0, 1.0};
  for (const auto& law : laws) levels.insert(levels.end(), law.cumulative.begin(), law.cumulative.end());
  std::sort(levels.begin(), levels.end());
  std::vector<double> distinct;
  for (double level : levels) {
    if (distinct.empty() || level - distinct.back() > kLevelTolerance) distinct.push_back(level);
  }

  auto upper_sum = [&](double level) {
    double total = 0.0;
    for (const auto& law : laws) total += law.upper(level);
    return total;
  };

  // Bisection over the candidate quantile levels (equivalently over lambda):
  // the optimal level is the smallest one whose upper interval ends reach 1.
  std::size_t lo = 0;
  std::size_t hi = distinct.size() - 1;
  int iterations = 0;
  while (lo < hi) {
    ++iterations;
    const std::size_t mid = lo + (hi - lo) / 2;
    if (upper_sum(distinct[mid]) >= 1.0 - kLevelTolerance) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const double level = distinct[lo];

  std::vector<double> lower(k);
  std::vector<double> upper(k);
  double lower_total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    lower[i] = laws[i].lower(level);
    upper[i] = std::max(lower[i], laws[i].upper(level));
    lower_total += lower[i];
  }
  if (lower_total > 1.0 + 1e-9) {
    if (k > 4) {
      throw ConvergenceError("eu_ensemble: infeasible interval adjustment and K too large for the oracle");
    }
    auto oracle = eu_bruteforce_oracle(q, 1e-3, cfg, 0);
    return EuResult{oracle.value, oracle.minimizer, std::nullopt, Estimator::brute_force, iterations,
                    0.0, "interval adjustment infeasible; brute-force oracle used"};
  }

  const Categorical center = mean(q);
  auto point = project_onto_box_plane(center.probs(), lower, upper);
  const double total = std::accumulate(point.begin(), point.end(), 0.0);
  Categorical minimizer(point);
  const double value = eu_objective_ensemble(q, minimizer.probs());
  return EuResult{std::max(0.0, value), std::move(minimizer), 0.5 - level, Estimator::lagrangian,
                  iterations, std::abs(total - 1.0), "tie-break: mean projected onto optimal set"};
}

EuResult eu(const SecondOrder& q, const EuSolverConfig& cfg) {
  if (const auto* dir = std::get_if<Dirichlet>(&q)) return eu_dirichlet(*dir, cfg);
  return eu_ensemble(std::get<Ensemble>(q), cfg);
}

OracleResult eu_bruteforce_oracle(const SecondOrder& q, double grid_step,
                                  const EuSolverConfig& cfg, std::uint64_t seed) {
  const std::size_t k = label_count(q);
  if (k > 4) throw std::invalid_argument("brute-force oracle supports K <= 4, got " + std::to_string(k));
  if (!(grid_step > 0.0 && grid_step <= 0.5)) throw std::invalid_argument("grid_step must be in (0, 0.5]");
  const auto n = static_cast<std::size_t>(std::llround(1.0 / grid_step));

  // The objective is separable, so per-coordinate tables on the lattice
  // values make the exhaustive search cheap.
  std::vector<std::vector<double>> table(k, std::vector<double>(n + 1, 0.0));
  std::vector<std::vector<double>> draws;
  if (const auto* ens = std::get_if<Ensemble>(&q)) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t c = 0; c <= n; ++c) {
        const double x = static_cast<double>(c) / static_cast<double>(n);
        double acc = 0.0;
        for (std::size_t a = 0; a < ens->count(); ++a) acc += ens->weights()[a] * std::abs(ens->atoms()[a][i] - x);
        table[i][c] = 0.5 * acc;
      }
    }
  } else {
    cfg.validate();
    const auto& dir = std::get<Dirichlet>(q);
    Rng rng(seed);
    draws.assign(k, std::vector<double>(cfg.mc_samples));
    std::vector<double> p;
    std::vector<double> log_p;
    for (std::size_t s = 0; s < cfg.mc_samples; ++s) {
      draw_dirichlet(dir, rng, p, log_p);
      for (std::size_t i = 0; i < k; ++i) draws[i][s] = p[i];
    }
    const double count = static_cast<double>(cfg.mc_samples);
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<double> sorted = draws[i];
      std::sort(sorted.begin(), sorted.end());
      std::vector<double> prefix(sorted.size() + 1, 0.0);
      for (std::size_t s = 0; s < sorted.size(); ++s) prefix[s + 1] = prefix[s] + sorted[s];
      for (std::size_t c = 0; c <= n; ++c) {
        const double x = static_cast<double>(c) / static_cast<double>(n);
        const auto below = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
        const double below_sum = prefix[below];
        const double above_sum = prefix.back() - below_sum;
        const double nb = static_cast<double>(below);
        table[i][c] = 0.5 * ((x * nb - below_sum) + (above_sum - x * (count - nb))) / count;
      }
    }
  }

  std::vector<std::size_t> best;
  double best_value = 0.0;
  search_lattice(table, n, best, best_value);
  std::vector<double> point(k);
  for (std::size_t i = 0; i < k; ++i) point[i] = static_cast<double>(best[i]) / static_cast<double>(n);

  double std_error = 0.0;
  if (!draws.empty()) {
    const std::size_t samples = draws.front().size();
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      double l1 = 0.0;
      for (std::size_t i = 0; i < k; ++i) l1 += std::abs(draws[i][s] - point[i]);
      sum += 0.5 * l1;
      sum_sq += 0.25 * l1 * l1;
    }
    const double m = static_cast<double>(samples);
    const double avg = sum / m;
    std_error = std::sqrt(std::max(0.0, (sum_sq - m * avg * avg) / (m - 1.0)) / m);
  }
  return OracleResult{best_value, Categorical(point), std_error};
}

UncertaintyReport measure(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed) {
  UncertaintyReport report;
  report.k = label_count(q);
  report.tu = tu(q);
  const Estimate aleatoric = au(q, cfg, seed);
  report.au = aleatoric.value;
  EuResult epistemic = eu(q, cfg);
  report.eu = epistemic.value;
  report.minimizer_q = epistemic.minimizer;
  report.lambda_star = epistemic.lambda_star;
  report.notes = epistemic.notes;
  if (std::holds_alternative<Dirichlet>(q)) {
    report.estimator = Estimator::monte_carlo;
    report.mc_stderr = aleatoric.std_error;
  } else {
    report.estimator = epistemic.estimator == Estimator::brute_force ? Estimator::brute_force
                                                                    : Estimator::closed_form;
  }
  return report;
}

UncertaintyReport normalize(const UncertaintyReport& report, std::size_t k) {
  if (report.normalized) throw std::logic_error("report is already normalized");
  if (k < 2) throw std::invalid_argument("normalization needs K >= 2");
  const double factor = static_cast<double>(k) / static_cast<double>(k - 1);
  UncertaintyReport out = report;
  out.tu *= factor;
  out.au *= factor;
  out.eu *= factor;
  if (out.mc_stderr) *out.mc_stderr *= factor;
  out.normalized = true;
  return out;
}

}  // namespace souq
