#pragma once

// First-order distributions on a finite label space and the information
// and transport primitives defined on them.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace souq {

/// Sentinel returned by divergences that are unbounded for the given inputs.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Sum-to-one tolerance used when constructing distributions. Deviations
/// up to this size are renormalized away; larger ones are rejected.
inline constexpr double kSimplexTolerance = 1e-9;

/// A finite label space {0, ..., K-1} with K >= 2.
class LabelSpace {
 public:
  explicit LabelSpace(std::size_t size);

  std::size_t size() const noexcept { return size_; }

  friend bool operator==(LabelSpace, LabelSpace) = default;

 private:
  std::size_t size_;
};

/// A point of the (K-1)-simplex.
///
/// Construction validates the entries: negatives beyond -1e-12 and sums
/// further than kSimplexTolerance from one throw std::invalid_argument.
/// Accepted vectors are clipped at zero and renormalized, so every instance
/// sums to one up to rounding.
class Categorical {
 public:
  explicit Categorical(std::vector<double> probs);

  std::size_t size() const noexcept { return probs_.size(); }
  LabelSpace space() const { return LabelSpace(probs_.size()); }
  std::span<const double> probs() const noexcept { return probs_; }
  const std::vector<double>& vec() const noexcept { return probs_; }
  double operator[](std::size_t y) const { return probs_[y]; }

  friend bool operator==(const Categorical&, const Categorical&) = default;

 private:
  std::vector<double> probs_;
};

/// One-hot distribution at label y. Throws std::out_of_range if y >= K.
Categorical dirac_first_order(std::size_t y, LabelSpace space);

Categorical uniform_first_order(LabelSpace space);

/// Wasserstein distance under the 0/1 ground metric, which is the total
/// variation distance 1/2 * ||p - q||_1.
double tv_distance(const Categorical& p, const Categorical& q);

/// Same distance via the optimal diagonal coupling: 1 - sum_y min(p_y, q_y).
double tv_distance_by_coupling(const Categorical& p, const Categorical& q);

/// Shannon entropy in bits, with 0 log 0 = 0.
double entropy(std::span<const double> p);
inline double entropy(const Categorical& p) { return entropy(p.probs()); }

/// KL(p || q) in bits. Returns kInfinity when p is not absolutely
/// continuous with respect to q.
double kl_divergence(const Categorical& p, const Categorical& q);

/// Cross-entropy -sum p log2 q in bits, kInfinity when q vanishes where p
/// does not.
double cross_entropy(const Categorical& p, const Categorical& q);

/// Throws std::invalid_argument unless both have the same number of labels.
void require_same_space(const Categorical& p, const Categorical& q);

}  // namespace souq
