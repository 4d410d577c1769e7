#include "souq/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace souq {

namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

// Running mean and standard error of a Monte-Carlo quantity.
class Accumulator {
 public:
  void add(double v) {
    if (std::isinf(v)) {
      infinite_ = true;
      return;
    }
    ++n_;
    sum_ += v;
    sum_sq_ += v * v;
  }

  Estimate result() const {
    if (infinite_) return {kInfinity, 0.0};
    const double n = static_cast<double>(n_);
    const double avg = sum_ / n;
    const double var = n > 1.0 ? std::max(0.0, (sum_sq_ - n * avg * avg) / (n - 1.0)) : 0.0;
    return {avg, std::sqrt(var / n)};
  }

 private:
  std::size_t n_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  bool infinite_ = false;
};

// -sum_y p(y) log2 q(y) over raw vectors; p may be a sub-probability.
double raw_cross_entropy(std::span<const double> p, std::span<const double> q) {
  double ce = 0.0;
  for (std::size_t y = 0; y < p.size(); ++y) {
    if (p[y] == 0.0) continue;
    if (q[y] == 0.0) return kInfinity;
    ce -= p[y] * std::log2(q[y]);
  }
  return ce;
}

// Sum over ordered pairs of atoms of w_a w_b f(a, b), with the infinity
// sentinel propagating from any term that carries positive weight.
template <typename Term>
double pairwise_sum(std::span<const double> weights, Term term) {
  double total = 0.0;
  for (std::size_t a = 0; a < weights.size(); ++a) {
    if (weights[a] == 0.0) continue;
    for (std::size_t b = 0; b < weights.size(); ++b) {
      if (weights[b] == 0.0) continue;
      const double v = term(a, b);
      if (std::isinf(v)) return kInfinity;
      total += weights[a] * weights[b] * v;
    }
  }
  return total;
}

// Draws pairs of independent Dirichlet vectors and feeds (p, log p, log p')
// to `visit`.
template <typename Visit>
void for_each_pair(const Dirichlet& q, std::size_t samples, std::uint64_t seed, Visit visit) {
  Rng rng(seed);
  std::vector<double> p;
  std::vector<double> log_p;
  std::vector<double> p2;
  std::vector<double> log_p2;
  for (std::size_t s = 0; s < samples; ++s) {
    draw_dirichlet(q, rng, p, log_p);
    draw_dirichlet(q, rng, p2, log_p2);
    visit(p, log_p, log_p2);
  }
}

double log2_k(std::size_t k) { return std::log2(static_cast<double>(k)); }

}  // namespace

std::string_view to_string(BaselineFamily f) {
  return f == BaselineFamily::entropy_default ? "entropy" : "cross_entropy";
}

double entropy_tu(const SecondOrder& q) { return entropy(mean(q)); }

Estimate entropy_au(const SecondOrder& q, const EuSolverConfig&, std::uint64_t) {
  if (const auto* ens = std::get_if<Ensemble>(&q)) {
    double total = 0.0;
    for (std::size_t a = 0; a < ens->count(); ++a) total += ens->weights()[a] * entropy(ens->atoms()[a]);
    return {total, 0.0};
  }
  const auto& dir = std::get<Dirichlet>(q);
  const double psi_total = digamma(dir.alpha0() + 1.0);
  double nats = 0.0;
  for (double a : dir.alpha()) nats += (a / dir.alpha0()) * (psi_total - digamma(a + 1.0));
  return {std::max(0.0, nats * kInvLn2), 0.0};
}

Estimate entropy_au_monte_carlo(const Dirichlet& q, std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  Accumulator acc;
  std::vector<double> p;
  std::vector<double> log_p;
  for (std::size_t s = 0; s < samples; ++s) {
    draw_dirichlet(q, rng, p, log_p);
    double h = 0.0;
    for (std::size_t y = 0; y < p.size(); ++y) h -= p[y] * log_p[y];
    acc.add(h * kInvLn2);
  }
  return acc.result();
}

Estimate entropy_eu(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed) {
  const Categorical center = mean(q);
  if (const auto* ens = std::get_if<Ensemble>(&q)) {
    double total = 0.0;
    for (std::size_t a = 0; a < ens->count(); ++a) {
      if (ens->weights()[a] > 0.0) total += ens->weights()[a] * kl_divergence(ens->atoms()[a], center);
    }
    return {total, 0.0};
  }
  cfg.validate();
  const auto& dir = std::get<Dirichlet>(q);
  std::vector<double> log_center(center.size());
  for (std::size_t y = 0; y < center.size(); ++y) log_center[y] = std::log(center[y]);
  Rng rng(seed);
  Accumulator acc;
  std::vector<double> p;
  std::vector<double> log_p;
  for (std::size_t s = 0; s < cfg.mc_samples; ++s) {
    draw_dirichlet(dir, rng, p, log_p);
    double kl = 0.0;
    for (std::size_t y = 0; y < p.size(); ++y) kl += p[y] * (log_p[y] - log_center[y]);
    acc.add(kl * kInvLn2);
  }
  return acc.result();
}

KlReframed kl_reframed(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed) {
  const std::size_t k = label_count(q);
  const Categorical unif = uniform_first_order(LabelSpace(k));
  KlReframed out;
  out.tu = {log2_k(k) - kl_divergence(mean(q), unif), 0.0};
  if (const auto* ens = std::get_if<Ensemble>(&q)) {
    double expected_kl = 0.0;
    for (std::size_t a = 0; a < ens->count(); ++a) {
      expected_kl += ens->weights()[a] * kl_divergence(ens->atoms()[a], unif);
    }
    out.au = {log2_k(k) - expected_kl, 0.0};
  } else {
    cfg.validate();
    const auto& dir = std::get<Dirichlet>(q);
    const double log_k = std::log(static_cast<double>(k));
    Rng rng(seed);
    Accumulator acc;
    std::vector<double> p;
    std::vector<double> log_p;
    for (std::size_t s = 0; s < cfg.mc_samples; ++s) {
      draw_dirichlet(dir, rng, p, log_p);
      double kl = 0.0;
      for (std::size_t y = 0; y < p.size(); ++y) kl += p[y] * (log_p[y] + log_k);
      acc.add(log2_k(k) - kl * kInvLn2);
    }
    out.au = acc.result();
  }
  out.eu = entropy_eu(q, cfg, seed);
  return out;
}

Estimate ce_tu(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed) {
  if (const auto* ens = std::get_if<Ensemble>(&q)) {
    const auto& atoms = ens->atoms();
    return {pairwise_sum(ens->weights(), [&](std::size_t a, std::size_t b) {
              return cross_entropy(atoms[a], atoms[b]);
            }),
            0.0};
  }
  cfg.validate();
  Accumulator acc;
  for_each_pair(std::get<Dirichlet>(q), cfg.mc_samples, seed,
                [&](const auto& p, const auto&, const auto& log_p2) {
                  double ce = 0.0;
                  for (std::size_t y = 0; y < p.size(); ++y) ce -= p[y] * log_p2[y];
                  acc.add(ce * kInvLn2);
                });
  return acc.result();
}

Estimate ce_eu(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed) {
  if (const auto* ens = std::get_if<Ensemble>(&q)) {
    const auto& atoms = ens->atoms();
    return {pairwise_sum(ens->weights(), [&](std::size_t a, std::size_t b) {
              return kl_divergence(atoms[a], atoms[b]);
            }),
            0.0};
  }
  cfg.validate();
  Accumulator acc;
  for_each_pair(std::get<Dirichlet>(q), cfg.mc_samples, seed,
                [&](const auto& p, const auto& log_p, const auto& log_p2) {
                  double kl = 0.0;
                  for (std::size_t y = 0; y < p.size(); ++y) kl += p[y] * (log_p[y] - log_p2[y]);
                  acc.add(std::max(0.0, kl) * kInvLn2);
                });
  return acc.result();
}

BaselineReport entropy_report(const SecondOrder& q, const EuSolverConfig& cfg, std::uint64_t seed) {
  BaselineReport r;
  r.family = BaselineFamily::entropy_default;
  r.k = label_count(q);
  r.tu = entropy_tu(q);
  r.au = entropy_au(q, cfg, seed).value;
  const Estimate e = entropy_eu(q, cfg, seed);
  r.eu = e.value;
  if (std::holds_alternative<Dirichlet>(q)) {
    r.estimator = Estimator::monte_carlo;
    r.mc_stderr = e.std_error;
  }
  return r;
}

BaselineReport cross_entropy_report(const SecondOrder& q, const EuSolverConfig& cfg,
                                    std::uint64_t seed) {
  BaselineReport r;
  r.family = BaselineFamily::cross_entropy_alt;
  r.k = label_count(q);
  const Estimate t = ce_tu(q, cfg, seed);
  const Estimate e = ce_eu(q, cfg, seed);
  r.tu = t.value;
  r.au = entropy_au(q, cfg, seed).value;
  r.eu = e.value;
  if (std::holds_alternative<Dirichlet>(q)) {
    r.estimator = Estimator::monte_carlo;
    r.mc_stderr = std::max(t.std_error, e.std_error);
  } else {
    r.estimator = Estimator::exact_pairwise;
  }
  return r;
}

double entropy_tu(const Restricted& q) { return entropy(mean(q)); }

Estimate ce_tu(const Restricted& q, const EuSolverConfig& cfg, std::uint64_t seed) {
  if (const auto* sub = std::get_if<SubEnsemble>(&q.body())) {
    return {pairwise_sum(sub->weights, [&](std::size_t a, std::size_t b) {
              return raw_cross_entropy(sub->atoms[a], sub->atoms[b]);
            }),
            0.0};
  }
  cfg.validate();
  const auto& block = std::get<DirichletBlock>(q.body());
  // The block's joint law is that of the leading coordinates of a Dirichlet
  // with the remaining mass lumped into one extra coordinate.
  std::vector<double> alpha = block.alpha;
  double used = 0.0;
  for (double a : alpha) used += a;
  alpha.push_back(std::max(kMinConcentration, block.alpha0 - used));
  const std::size_t width = block.alpha.size();
  Accumulator acc;
  for_each_pair(Dirichlet(alpha), cfg.mc_samples, seed,
                [&](const auto& p, const auto&, const auto& log_p2) {
                  double ce = 0.0;
                  for (std::size_t y = 0; y < width; ++y) ce -= p[y] * log_p2[y];
                  acc.add(ce * kInvLn2);
                });
  return acc.result();
}

}  // namespace souq
