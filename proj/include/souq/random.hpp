#pragma once

#include <cstdint>
#include <random>

namespace souq {

/// Seeded generator owned by the caller. Streams derived from one seed via
/// Rng(seed, stream) are independent and reproducible, which is how tasks
/// split randomness without sharing state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform() { return uniform_(engine_); }
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  double normal() { return normal_(engine_); }
  std::uint64_t next_u64() { return engine_(); }
  std::size_t index(std::size_t n);

  /// log of a Gamma(shape, 1) variate. Marsaglia-Tsang, with the
  /// U^(1/shape) boost for shape < 1 applied in log space so tiny shapes
  /// do not underflow.
  double log_gamma_variate(double shape);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Deterministic child seed for task `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace souq
