#pragma once

// Property-based checks of the axioms A0-A8 for a triple of uncertainty
// measures. Every trial is described by a JSON input (distributions plus
// transform parameters and Monte-Carlo seeds), so a failing trial can be
// serialized and replayed exactly.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "souq/baseline.hpp"
#include "souq/distance.hpp"
#include "souq/io.hpp"

namespace souq {

enum class Axiom { A0, A1, A2, A3, A4, A5, A6, A7, A8 };

inline constexpr Axiom kAllAxioms[] = {Axiom::A0, Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4,
                                       Axiom::A5, Axiom::A6, Axiom::A7, Axiom::A8};

std::string_view to_string(Axiom a);
Axiom axiom_from_string(std::string_view name);

enum class CheckStatus { pass, fail, not_applicable };

std::string_view to_string(CheckStatus s);

/// Total, aleatoric and epistemic uncertainty of one measure family.
struct MeasureTriple {
  using Measure = std::function<Estimate(const SecondOrder&, std::uint64_t seed)>;
  using RestrictedMeasure = std::function<Estimate(const Restricted&, std::uint64_t seed)>;

  std::string family;
  Measure tu;
  Measure au;
  Measure eu;
  /// TU on a label restriction (unrenormalized sub-probabilities).
  RestrictedMeasure tu_restricted;
  /// Known maximum of TU over all Q with K labels, if the family has one.
  std::function<std::optional<double>(std::size_t k)> tu_bound;
  /// TU is a function of the mean of Q alone.
  bool tu_mean_only = false;
};

MeasureTriple distance_triple(const EuSolverConfig& cfg);
MeasureTriple entropy_triple(const EuSolverConfig& cfg);
MeasureTriple cross_entropy_triple(const EuSolverConfig& cfg);

/// "distance", "entropy" or "cross_entropy".
MeasureTriple triple_by_name(std::string_view family, const EuSolverConfig& cfg);

struct Tolerance {
  double exact = 1e-9;
  double mc_sigmas = 3.0;
  double mc_floor = 1e-4;

  /// Allowed slack when comparing the given estimates: `exact` if all are
  /// exact, otherwise mc_sigmas times their combined stderr, at least mc_floor.
  double allowed(std::initializer_list<Estimate> values) const;
};

struct Counterexample {
  Axiom axiom = Axiom::A0;
  std::string family;
  Json inputs;
  Json observed;
  double tolerance = 0.0;
  /// Amount by which the axiom's inequality or equality is missed.
  double gap = 0.0;

  Json to_json() const;
  static Counterexample from_json(const Json& j);
};

struct AxiomCheckResult {
  Axiom axiom = Axiom::A0;
  CheckStatus status = CheckStatus::pass;
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;
  std::optional<Counterexample> counterexample;
  std::string notes;

  Json to_json() const;
};

/// Outcome of evaluating one trial input.
struct TrialOutcome {
  bool violated = false;
  double gap = 0.0;
  double tolerance = 0.0;
  Json observed;
  std::string note;
};

/// Draws one trial input for `axiom`; nullopt when the generator could not
/// produce a feasible transform.
std::optional<Json> generate_trial(Axiom axiom, Rng& rng);

/// Evaluates the axiom on a trial input.
TrialOutcome evaluate_trial(Axiom axiom, const MeasureTriple& triple, const Json& input,
                            const Tolerance& tol);

AxiomCheckResult check_axiom(Axiom axiom, const MeasureTriple& triple, std::size_t trials,
                             std::uint64_t seed, const Tolerance& tol = {});

std::vector<AxiomCheckResult> run_suite(const MeasureTriple& triple, std::size_t trials,
                                        std::uint64_t seed, const Tolerance& tol = {});

/// Random search over generated inputs followed by local perturbation of
/// the worst violation found. Spends at most `budget` evaluations.
std::optional<Counterexample> find_violation_witness(const MeasureTriple& triple, Axiom axiom,
                                                     std::size_t budget, std::uint64_t seed,
                                                     const Tolerance& tol = {});

/// Re-evaluates a serialized counterexample against `triple`.
TrialOutcome replay(const Counterexample& witness, const MeasureTriple& triple,
                    const Tolerance& tol = {});

}  // namespace souq
