#include "souq/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace souq {

namespace {

constexpr double kNegativeSlack = 1e-12;

}  // namespace

LabelSpace::LabelSpace(std::size_t size) : size_(size) {
  if (size < 2) {
    throw std::invalid_argument("label space needs at least 2 labels, got " +
                                std::to_string(size));
  }
}

Categorical::Categorical(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw std::invalid_argument("distribution needs at least 2 entries");
  }
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    double& v = probs_[i];
    if (!std::isfinite(v) || v < -kNegativeSlack || v > 1.0 + kNegativeSlack) {
      throw std::invalid_argument("probability entry " + std::to_string(i) +
                                  " out of [0, 1]: " + std::to_string(v));
    }
    v = std::clamp(v, 0.0, 1.0);
  }
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw std::invalid_argument("probabilities sum to " + std::to_string(total) +
                                ", not 1");
  }
  if (total != 1.0) {
    for (double& v : probs_) v /= total;
  }
}

Categorical dirac_first_order(std::size_t y, LabelSpace space) {
  if (y >= space.size()) {
    throw std::out_of_range("label " + std::to_string(y) + " outside K=" +
                            std::to_string(space.size()));
  }
  std::vector<double> p(space.size(), 0.0);
  p[y] = 1.0;
  return Categorical(std::move(p));
}

Categorical uniform_first_order(LabelSpace space) {
  return Categorical(std::vector<double>(space.size(), 1.0 / static_cast<double>(space.size())));
}

void require_same_space(const Categorical& p, const Categorical& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(p.size()) +
                                " vs " + std::to_string(q.size()));
  }
}

double tv_distance(const Categorical& p, const Categorical& q) {
  require_same_space(p, q);
  double l1 = 0.0;
  for (std::size_t y = 0; y < p.size(); ++y) l1 += std::abs(p[y] - q[y]);
  return 0.5 * l1;
}

double tv_distance_by_coupling(const Categorical& p, const Categorical& q) {
  require_same_space(p, q);
  double diagonal = 0.0;
  for (std::size_t y = 0; y < p.size(); ++y) diagonal += std::min(p[y], q[y]);
  return std::max(0.0, 1.0 - diagonal);
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return std::max(0.0, h);
}

double kl_divergence(const Categorical& p, const Categorical& q) {
  require_same_space(p, q);
  double d = 0.0;
  for (std::size_t y = 0; y < p.size(); ++y) {
    if (p[y] == 0.0) continue;
    if (q[y] == 0.0) return kInfinity;
    d += p[y] * std::log2(p[y] / q[y]);
  }
  return std::max(0.0, d);
}

double cross_entropy(const Categorical& p, const Categorical& q) {
  require_same_space(p, q);
  double ce = 0.0;
  for (std::size_t y = 0; y < p.size(); ++y) {
    if (p[y] == 0.0) continue;
    if (q[y] == 0.0) return kInfinity;
    ce -= p[y] * std::log2(q[y]);
  }
  return std::max(0.0, ce);
}

}  // namespace souq
