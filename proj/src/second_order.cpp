#include "souq/second_order.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace souq {

namespace {

std::vector<double> uniform_weights(std::size_t m) {
  return std::vector<double>(m, 1.0 / static_cast<double>(m));
}

// Largest eps with p +- eps*d inside the simplex.
double max_symmetric_step(const Categorical& p, std::span<const double> d) {
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (d[i] != 0.0) step = std::min(step, p[i] / std::abs(d[i]));
  }
  return step;
}

void split_atom(const Categorical& p, double weight, std::span<const double> d, double eps,
                std::vector<Categorical>& atoms, std::vector<double>& weights) {
  if (!(eps > 0.0)) {
    atoms.push_back(p);
    weights.push_back(weight);
    return;
  }
  std::vector<double> up(p.size());
  std::vector<double> down(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    up[i] = p[i] + eps * d[i];
    down[i] = p[i] - eps * d[i];
  }
  atoms.emplace_back(std::move(up));
  weights.push_back(0.5 * weight);
  atoms.emplace_back(std::move(down));
  weights.push_back(0.5 * weight);
}

}  // namespace

Dirichlet::Dirichlet(std::vector<double> alpha) : alpha_(std::move(alpha)), alpha0_(0.0) {
  if (alpha_.size() < 2) throw std::invalid_argument("Dirichlet needs at least 2 concentrations");
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    const double a = alpha_[i];
    if (!std::isfinite(a) || a < kMinConcentration) {
      throw std::invalid_argument("alpha[" + std::to_string(i) + "] = " + std::to_string(a) +
                                  " is not a valid concentration (must be >= 1e-8)");
    }
    alpha0_ += a;
  }
  if (alpha0_ > kMaxBetaShape) {
    throw std::invalid_argument("Dirichlet total concentration " + std::to_string(alpha0_) +
                                " exceeds supported maximum 1e6");
  }
}

Ensemble::Ensemble(std::vector<Categorical> atoms)
    : Ensemble(std::move(atoms), std::vector<double>{}) {}

Ensemble::Ensemble(std::vector<Categorical> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) throw std::invalid_argument("ensemble needs at least one atom");
  if (weights_.empty()) weights_ = uniform_weights(atoms_.size());
  if (weights_.size() != atoms_.size()) {
    throw std::invalid_argument("ensemble has " + std::to_string(atoms_.size()) + " atoms but " +
                                std::to_string(weights_.size()) + " weights");
  }
  const std::size_t k = atoms_.front().size();
  for (std::size_t m = 0; m < atoms_.size(); ++m) {
    if (atoms_[m].size() != k) {
      throw std::invalid_argument("atom " + std::to_string(m) + " has " +
                                  std::to_string(atoms_[m].size()) + " labels, expected " +
                                  std::to_string(k));
    }
    if (!std::isfinite(weights_[m]) || weights_[m] < 0.0) {
      throw std::invalid_argument("weight " + std::to_string(m) + " must be nonnegative");
    }
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw std::invalid_argument("ensemble weights sum to " + std::to_string(total) + ", not 1");
  }
  if (total != 1.0) {
    for (double& w : weights_) w /= total;
  }
}

std::size_t label_count(const SecondOrder& q) {
  return std::visit([](const auto& rep) { return rep.size(); }, q);
}

Ensemble second_order_dirac(const Categorical& p) { return Ensemble({p}, {1.0}); }

Ensemble vertex_uniform(LabelSpace space) {
  std::vector<Categorical> atoms;
  for (std::size_t y = 0; y < space.size(); ++y) atoms.push_back(dirac_first_order(y, space));
  return Ensemble(std::move(atoms));
}

Categorical mean(const Dirichlet& q) {
  std::vector<double> m(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) m[i] = q.alpha()[i] / q.alpha0();
  return Categorical(std::move(m));
}

Categorical mean(const Ensemble& q) {
  std::vector<double> m(q.size(), 0.0);
  for (std::size_t a = 0; a < q.count(); ++a) {
    const double w = q.weights()[a];
    const auto& p = q.atoms()[a];
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += w * p[i];
  }
  return Categorical(std::move(m));
}

Categorical mean(const SecondOrder& q) {
  return std::visit([](const auto& rep) { return mean(rep); }, q);
}

void draw_dirichlet(const Dirichlet& q, Rng& rng, std::vector<double>& p,
                    std::vector<double>& log_p) {
  const std::size_t k = q.size();
  p.resize(k);
  log_p.resize(k);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    log_p[i] = rng.log_gamma_variate(q.alpha()[i]);
    top = std::max(top, log_p[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    p[i] = std::exp(log_p[i] - top);
    total += p[i];
  }
  const double log_total = std::log(total);
  for (std::size_t i = 0; i < k; ++i) {
    p[i] /= total;
    log_p[i] = log_p[i] - top - log_total;
  }
}

std::vector<Categorical> sample(const SecondOrder& q, std::size_t n, Rng& rng) {
  std::vector<Categorical> out;
  out.reserve(n);
  if (const auto* dir = std::get_if<Dirichlet>(&q)) {
    std::vector<double> p;
    std::vector<double> log_p;
    for (std::size_t s = 0; s < n; ++s) {
      draw_dirichlet(*dir, rng, p, log_p);
      out.emplace_back(p);
    }
    return out;
  }
  const auto& ens = std::get<Ensemble>(q);
  std::discrete_distribution<std::size_t> pick(ens.weights().begin(), ens.weights().end());
  for (std::size_t s = 0; s < n; ++s) out.push_back(ens.atoms()[pick(rng.engine())]);
  return out;
}

std::vector<Categorical> sample(const SecondOrder& q, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample(q, n, rng);
}

BetaShape marginal_beta(const Dirichlet& q, std::size_t i) {
  if (i >= q.size()) {
    throw std::out_of_range("label " + std::to_string(i) + " outside K=" + std::to_string(q.size()));
  }
  const double a = q.alpha()[i];
  return BetaShape(a, q.alpha0() - a);
}

Restricted::Restricted(std::vector<std::size_t> labels, Body body)
    : labels_(std::move(labels)), body_(std::move(body)) {
  if (labels_.empty()) throw std::invalid_argument("restriction needs at least one label");
}

Restricted restrict_labels(const SecondOrder& q, std::span<const std::size_t> subset) {
  const std::size_t k = label_count(q);
  if (subset.empty()) throw std::invalid_argument("restriction subset is empty");
  std::vector<bool> seen(k, false);
  for (std::size_t y : subset) {
    if (y >= k) throw std::invalid_argument("restriction label " + std::to_string(y) + " out of range");
    if (seen[y]) throw std::invalid_argument("restriction label " + std::to_string(y) + " repeated");
    seen[y] = true;
  }
  if (subset.size() == k) throw std::invalid_argument("restriction subset must be a strict subset");

  std::vector<std::size_t> labels(subset.begin(), subset.end());
  if (const auto* dir = std::get_if<Dirichlet>(&q)) {
    DirichletBlock block{{}, dir->alpha0()};
    for (std::size_t y : labels) block.alpha.push_back(dir->alpha()[y]);
    return Restricted(std::move(labels), std::move(block));
  }
  const auto& ens = std::get<Ensemble>(q);
  SubEnsemble sub;
  sub.weights.assign(ens.weights().begin(), ens.weights().end());
  for (const auto& atom : ens.atoms()) {
    std::vector<double> coords;
    coords.reserve(labels.size());
    for (std::size_t y : labels) coords.push_back(atom[y]);
    sub.atoms.push_back(std::move(coords));
  }
  return Restricted(std::move(labels), std::move(sub));
}

std::vector<double> mean(const Restricted& q) {
  std::vector<double> m(q.size(), 0.0);
  if (const auto* block = std::get_if<DirichletBlock>(&q.body())) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = block->alpha[i] / block->alpha0;
    return m;
  }
  const auto& sub = std::get<SubEnsemble>(q.body());
  for (std::size_t a = 0; a < sub.atoms.size(); ++a) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += sub.weights[a] * sub.atoms[a][i];
  }
  return m;
}

Restricted product(const Restricted& first, const Restricted& second) {
  const auto* lhs = std::get_if<SubEnsemble>(&first.body());
  const auto* rhs = std::get_if<SubEnsemble>(&second.body());
  if (lhs == nullptr || rhs == nullptr) {
    throw std::invalid_argument("product is only defined for ensemble-backed restrictions");
  }
  for (std::size_t y : first.labels()) {
    if (std::find(second.labels().begin(), second.labels().end(), y) != second.labels().end()) {
      throw std::invalid_argument("product blocks overlap at label " + std::to_string(y));
    }
  }
  std::vector<std::size_t> labels = first.labels();
  labels.insert(labels.end(), second.labels().begin(), second.labels().end());
  SubEnsemble joint;
  for (std::size_t a = 0; a < lhs->atoms.size(); ++a) {
    for (std::size_t b = 0; b < rhs->atoms.size(); ++b) {
      std::vector<double> atom = lhs->atoms[a];
      atom.insert(atom.end(), rhs->atoms[b].begin(), rhs->atoms[b].end());
      joint.atoms.push_back(std::move(atom));
      joint.weights.push_back(lhs->weights[a] * rhs->weights[b]);
    }
  }
  return Restricted(std::move(labels), std::move(joint));
}

Ensemble mean_preserving_spread(const Ensemble& q, double magnitude, Rng& rng) {
  if (!(magnitude > 0.0)) throw std::invalid_argument("spread magnitude must be positive");
  const std::size_t k = q.size();
  std::vector<std::vector<double>> directions;
  directions.reserve(q.count());
  for (const auto& p : q.atoms()) {
    std::vector<double> d(k, 0.0);
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < k; ++i) {
      if (p[i] > 0.0) support.push_back(i);
    }
    if (support.size() >= 2) {
      double norm = 0.0;
      while (norm < 1e-8) {
        double avg = 0.0;
        for (std::size_t i : support) {
          d[i] = rng.normal();
          avg += d[i];
        }
        avg /= static_cast<double>(support.size());
        norm = 0.0;
        for (std::size_t i : support) {
          d[i] -= avg;
          norm += d[i] * d[i];
        }
        norm = std::sqrt(norm);
      }
      for (std::size_t i : support) d[i] /= norm;
    }
    directions.push_back(std::move(d));
  }
  return mean_preserving_spread(q, magnitude, directions);
}

Ensemble mean_preserving_spread(const Ensemble& q, double magnitude, std::uint64_t seed) {
  Rng rng(seed);
  return mean_preserving_spread(q, magnitude, rng);
}

Ensemble mean_preserving_spread(const Ensemble& q, double magnitude,
                                std::span<const std::vector<double>> directions) {
  if (!(magnitude > 0.0)) throw std::invalid_argument("spread magnitude must be positive");
  if (directions.size() != q.count()) {
    throw std::invalid_argument("need one spread direction per atom");
  }
  std::vector<Categorical> atoms;
  std::vector<double> weights;
  for (std::size_t a = 0; a < q.count(); ++a) {
    const auto& d = directions[a];
    if (d.size() != q.size()) throw std::invalid_argument("spread direction has wrong length");
    const double total = std::accumulate(d.begin(), d.end(), 0.0);
    if (std::abs(total) > 1e-12) throw std::invalid_argument("spread direction must sum to zero");
    const double eps = std::min(magnitude, max_symmetric_step(q.atoms()[a], d));
    split_atom(q.atoms()[a], q.weights()[a], d, eps, atoms, weights);
  }
  return Ensemble(std::move(atoms), std::move(weights));
}

Ensemble spread_preserving_shift(const Ensemble& q, std::span<const double> z) {
  if (z.size() != q.size()) throw std::invalid_argument("shift vector has wrong length");
  const double total = std::accumulate(z.begin(), z.end(), 0.0);
  if (std::abs(total) > 1e-12) throw std::invalid_argument("shift vector must sum to zero");
  std::vector<Categorical> atoms;
  atoms.reserve(q.count());
  for (std::size_t a = 0; a < q.count(); ++a) {
    std::vector<double> shifted(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      shifted[i] = q.atoms()[a][i] + z[i];
      if (shifted[i] < -1e-12 || shifted[i] > 1.0 + 1e-12) {
        throw std::invalid_argument("shift moves atom " + std::to_string(a) +
                                    " out of the simplex at label " + std::to_string(i));
      }
    }
    atoms.emplace_back(std::move(shifted));
  }
  return Ensemble(std::move(atoms), std::vector<double>(q.weights().begin(), q.weights().end()));
}

}  // namespace souq
