#include "souq/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace souq {

namespace {

constexpr std::size_t kMinLabels = 2;
constexpr std::size_t kMaxLabels = 6;
constexpr std::size_t kMaxAtoms = 8;
constexpr std::size_t kMaxProductAtoms = 6;
constexpr std::size_t kPerturbationSteps = 200;

std::size_t axiom_index(Axiom a) { return static_cast<std::size_t>(a); }

// ---- generators -----------------------------------------------------------

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

std::size_t random_label_count(Rng& rng) {
  return kMinLabels + rng.index(kMaxLabels - kMinLabels + 1);
}

std::vector<double> symmetric_dirichlet_draw(std::size_t k, double concentration, Rng& rng) {
  std::vector<double> p;
  std::vector<double> log_p;
  draw_dirichlet(Dirichlet(std::vector<double>(k, concentration)), rng, p, log_p);
  return p;
}

std::vector<double> one_hot(std::size_t k, std::size_t y) {
  std::vector<double> p(k, 0.0);
  p[y] = 1.0;
  return p;
}

// A first-order distribution from a mix of regimes: interior points,
// sparse vectors with zero coordinates, and one-hots.
std::vector<double> random_categorical(std::size_t k, Rng& rng) {
  const double regime = rng.uniform();
  if (regime < 0.1) return one_hot(k, rng.index(k));
  std::vector<double> p = symmetric_dirichlet_draw(k, log_uniform(rng, 0.1, 5.0), rng);
  if (regime < 0.25 && k > 2) {
    p[rng.index(k)] = 0.0;
    double total = 0.0;
    for (double v : p) total += v;
    if (total <= 0.0) return one_hot(k, rng.index(k));
    for (double& v : p) v /= total;
  }
  return p;
}

std::vector<double> random_weights(std::size_t m, Rng& rng) {
  if (rng.uniform() < 0.5) return std::vector<double>(m, 1.0 / static_cast<double>(m));
  if (m == 1) return {1.0};
  return symmetric_dirichlet_draw(m, 1.0, rng);
}

Ensemble random_ensemble(std::size_t k, std::size_t max_atoms, Rng& rng) {
  const std::size_t m = 1 + rng.index(max_atoms);
  std::vector<Categorical> atoms;
  for (std::size_t a = 0; a < m; ++a) atoms.emplace_back(random_categorical(k, rng));
  return Ensemble(std::move(atoms), random_weights(m, rng));
}

Dirichlet random_dirichlet(std::size_t k, Rng& rng) {
  std::vector<double> alpha(k);
  for (double& a : alpha) a = log_uniform(rng, 0.2, 20.0);
  return Dirichlet(std::move(alpha));
}

SecondOrder random_second_order(std::size_t k, Rng& rng) {
  if (rng.uniform() < 0.5) return random_ensemble(k, kMaxAtoms, rng);
  return random_dirichlet(k, rng);
}

Ensemble random_dirac_mixture(std::size_t k, Rng& rng) {
  const std::size_t m = 1 + rng.index(k);
  std::vector<Categorical> atoms;
  for (std::size_t a = 0; a < m; ++a) atoms.emplace_back(one_hot(k, rng.index(k)));
  return Ensemble(std::move(atoms), random_weights(m, rng));
}

// Random nonempty strict subset of {0, ..., k-1}, sorted.
std::vector<std::size_t> random_block(std::size_t k, Rng& rng) {
  std::vector<std::size_t> block;
  while (block.empty() || block.size() == k) {
    block.clear();
    for (std::size_t y = 0; y < k; ++y) {
      if (rng.uniform() < 0.5) block.push_back(y);
    }
  }
  return block;
}

std::vector<std::size_t> complement(std::size_t k, const std::vector<std::size_t>& block) {
  std::vector<std::size_t> rest;
  for (std::size_t y = 0; y < k; ++y) {
    if (std::find(block.begin(), block.end(), y) == block.end()) rest.push_back(y);
  }
  return rest;
}

// Largest t with every atom + t*d inside the simplex.
double max_shift_step(const Ensemble& q, std::span<const double> d) {
  double t_max = kInfinity;
  for (const auto& p : q.atoms()) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] < 0.0) t_max = std::min(t_max, p[i] / -d[i]);
      if (d[i] > 0.0) t_max = std::min(t_max, (1.0 - p[i]) / d[i]);
    }
  }
  return t_max;
}

// Zero-sum direction with negative components only where every atom has
// slack below and positive components only where every atom has slack
// above, scaled to a random fraction of the feasible step.
std::optional<std::vector<double>> random_feasible_shift(const Ensemble& q, Rng& rng) {
  const std::size_t k = q.size();
  std::vector<double> lo(k, 1.0);
  std::vector<double> hi(k, 0.0);
  for (const auto& p : q.atoms()) {
    for (std::size_t i = 0; i < k; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  for (int attempt = 0; attempt < 20; ++attempt) {
    std::vector<double> d(k);
    double positive = 0.0;
    double negative = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double v = rng.normal();
      if (lo[i] <= 0.0) v = std::abs(v);
      if (hi[i] >= 1.0) v = -std::abs(v);
      if (lo[i] <= 0.0 && hi[i] >= 1.0) v = 0.0;
      d[i] = v;
      if (v > 0.0) positive += v;
      if (v < 0.0) negative -= v;
    }
    if (positive <= 0.0 || negative <= 0.0) continue;
    for (double& v : d) {
      if (v < 0.0) v *= positive / negative;
    }
    const double t_max = max_shift_step(q, d);
    if (!(t_max > 1e-9)) continue;
    const double t = t_max * (0.1 + 0.8 * rng.uniform());
    for (double& v : d) v *= t;
    return d;
  }
  return std::nullopt;
}

Json block_json(const std::vector<std::size_t>& block) { return Json(block); }

// ---- perturbation ---------------------------------------------------------

std::vector<double> jitter_categorical(std::span<const double> p, Rng& rng) {
  const std::vector<double> r = random_categorical(p.size(), rng);
  const double s = 0.2 * rng.uniform();
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = (1.0 - s) * p[i] + s * r[i];
  return out;
}

std::vector<double> jitter_weights(std::span<const double> w, Rng& rng) {
  std::vector<double> out(w.size());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    out[i] = w[i] * std::exp(0.2 * rng.normal());
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

SecondOrder jitter(const SecondOrder& q, Rng& rng, bool keep_atoms = false) {
  if (const auto* dir = std::get_if<Dirichlet>(&q)) {
    std::vector<double> alpha(dir->alpha().begin(), dir->alpha().end());
    for (double& a : alpha) a = std::clamp(a * std::exp(0.2 * rng.normal()), 1e-3, 1e4);
    return Dirichlet(std::move(alpha));
  }
  const auto& ens = std::get<Ensemble>(q);
  std::vector<Categorical> atoms;
  for (const auto& atom : ens.atoms()) {
    atoms.emplace_back(keep_atoms ? atom.vec() : jitter_categorical(atom.probs(), rng));
  }
  return Ensemble(std::move(atoms), jitter_weights(ens.weights(), rng));
}

Json perturb_trial(Axiom axiom, const Json& input, Rng& rng) {
  Json out = input;
  switch (axiom) {
    case Axiom::A1:
      out["p"] = jitter_categorical(input.at("p").get<std::vector<double>>(), rng);
      return out;
    case Axiom::A2: {
      const bool dirac = input.at("kind") == "dirac_mixture";
      out["q"] = distribution_to_json(jitter(distribution_from_json(input.at("q")), rng, dirac));
      return out;
    }
    case Axiom::A5:
      out["q"] = distribution_to_json(jitter(distribution_from_json(input.at("q")), rng));
      if (input.at("kind") == "ensemble_spread") {
        out["magnitude"] =
            std::clamp(input.at("magnitude").get<double>() * std::exp(0.2 * rng.normal()), 1e-3, 0.5);
        out["spread_seed"] = rng.next_u64();
      } else {
        out["scale"] = std::clamp(input.at("scale").get<double>() * std::exp(0.2 * rng.normal()), 0.05, 0.95);
      }
      return out;
    case Axiom::A6: {
      const Ensemble q = std::get<Ensemble>(jitter(distribution_from_json(input.at("q")), rng));
      std::vector<double> z = input.at("z").get<std::vector<double>>();
      for (double& v : z) v *= std::exp(0.2 * rng.normal());
      double sum = 0.0;
      for (double v : z) sum += v;
      for (double& v : z) v -= sum / static_cast<double>(z.size());
      const double t_max = max_shift_step(q, z);
      if (!(t_max > 0.0)) throw std::invalid_argument("perturbed shift is infeasible");
      if (t_max < 1.0) {
        for (double& v : z) v *= 0.9 * t_max;
      }
      out["q"] = distribution_to_json(q);
      out["z"] = z;
      return out;
    }
    default:
      out["q"] = distribution_to_json(jitter(distribution_from_json(input.at("q")), rng));
      return out;
  }
}

// ---- evaluation helpers ---------------------------------------------------

// Amount by which a <= b fails; infinities on both sides compare equal.
double excess(double a, double b) {
  if (a == b) return 0.0;
  if (std::isinf(b) && b > 0.0) return 0.0;
  if (std::isinf(a) && a > 0.0) return kInfinity;
  return a - b;
}

double mismatch(double a, double b) {
  if (a == b) return 0.0;
  if (std::isinf(a) || std::isinf(b)) return kInfinity;
  return std::abs(a - b);
}

Json estimate_json(const Estimate& e) {
  return Json{{"value", number_to_json(e.value)}, {"stderr", e.std_error}};
}

// Accumulates several comparisons; the trial fails if any gap exceeds its
// own tolerance, and the reported gap is the one with the largest excess.
class Comparisons {
 public:
  void add(double gap, double tolerance) {
    const double over = gap - tolerance;
    if (!any_ || over > worst_over_) {
      worst_over_ = over;
      gap_ = gap;
      tolerance_ = tolerance;
      any_ = true;
    }
  }

  void fill(TrialOutcome& out) const {
    out.gap = gap_;
    out.tolerance = tolerance_;
    out.violated = any_ && worst_over_ > 0.0;
  }

 private:
  bool any_ = false;
  double worst_over_ = 0.0;
  double gap_ = 0.0;
  double tolerance_ = 0.0;
};

std::uint64_t trial_seed(const Json& input) { return input.at("seed").get<std::uint64_t>(); }

std::vector<std::size_t> block_from(const Json& input) {
  return input.at("block").get<std::vector<std::size_t>>();
}

TrialOutcome evaluate_a0(const MeasureTriple& m, const Json& in, const Tolerance& tol) {
  const SecondOrder q = distribution_from_json(in.at("q"));
  const std::uint64_t seed = trial_seed(in);
  const Estimate t = m.tu(q, seed);
  const Estimate a = m.au(q, seed);
  const Estimate e = m.eu(q, seed);
  TrialOutcome out;
  out.observed = {{"tu", estimate_json(t)}, {"au", estimate_json(a)}, {"eu", estimate_json(e)}};
  Comparisons c;
  for (const Estimate& v : {t, a, e}) c.add(-v.value, tol.allowed({v}));
  c.fill(out);
  return out;
}

TrialOutcome evaluate_a1(const MeasureTriple& m, const Json& in, const Tolerance& tol) {
  const Categorical p(in.at("p").get<std::vector<double>>());
  const std::size_t y = in.at("y").get<std::size_t>();
  const std::uint64_t seed = trial_seed(in);
  const LabelSpace space(p.size());
  const Estimate unif = m.au(second_order_dirac(uniform_first_order(space)), seed);
  const Estimate mid = m.au(second_order_dirac(p), seed);
  const Estimate vertex = m.au(second_order_dirac(dirac_first_order(y, space)), seed);
  TrialOutcome out;
  out.observed = {{"au_uniform", estimate_json(unif)},
                  {"au_p", estimate_json(mid)},
                  {"au_vertex", estimate_json(vertex)}};
  Comparisons c;
  c.add(excess(mid.value, unif.value), tol.allowed({mid, unif}));
  c.add(excess(vertex.value, mid.value), tol.allowed({vertex, mid}));
  c.add(mismatch(vertex.value, 0.0), tol.allowed({vertex}));
  c.fill(out);
  return out;
}

TrialOutcome evaluate_a2(const MeasureTriple& m, const Json& in, const Tolerance& tol) {
  const SecondOrder q = distribution_from_json(in.at("q"));
  const std::uint64_t seed = trial_seed(in);
  TrialOutcome out;
  Comparisons c;
  if (in.at("kind") == "dirac_mixture") {
    const std::size_t k = label_count(q);
    const Estimate aleatoric = m.au(q, seed);
    const Estimate e = m.eu(q, seed);
    const Estimate reference = m.eu(vertex_uniform(LabelSpace(k)), seed);
    out.observed = {{"au_q", estimate_json(aleatoric)},
                    {"eu_q", estimate_json(e)},
                    {"eu_vertex_uniform", estimate_json(reference)}};
    if (mismatch(aleatoric.value, 0.0) > tol.allowed({aleatoric})) {
      out.note = "input has nonzero AU; the comparison does not apply";
      return out;
    }
    c.add(excess(e.value, reference.value), tol.allowed({e, reference}));
  } else {
    const Categorical p(in.at("p").get<std::vector<double>>());
    const Estimate e = m.eu(q, seed);
    const Estimate point = m.eu(second_order_dirac(p), seed);
    out.observed = {{"eu_q", estimate_json(e)}, {"eu_dirac", estimate_json(point)}};
    c.add(excess(point.value, e.value), tol.allowed({point, e}));
    c.add(mismatch(point.value, 0.0), tol.allowed({point}));
  }
  c.fill(out);
  return out;
}

TrialOutcome evaluate_a3(const MeasureTriple& m, const Json& in, const Tolerance& tol) {
  const SecondOrder q = distribution_from_json(in.at("q"));
  const std::uint64_t seed = trial_seed(in);
  const Estimate t = m.tu(q, seed);
  const Estimate a = m.au(q, seed);
  const Estimate e = m.eu(q, seed);
  TrialOutcome out;
  out.observed = {{"tu", estimate_json(t)}, {"au", estimate_json(a)}, {"eu", estimate_json(e)}};
  Comparisons c;
  c.add(excess(a.value, t.value), tol.allowed({a, t}));
  c.add(excess(e.value, t.value), tol.allowed({e, t}));
  c.fill(out);
  return out;
}

TrialOutcome evaluate_a4(const MeasureTriple& m, const Json& in, const Tolerance& tol) {
  const SecondOrder q = distribution_from_json(in.at("q"));
  const std::uint64_t seed = trial_seed(in);
  const std::size_t k = label_count(q);
  const Estimate t = m.tu(q, seed);
  const Estimate uniform = m.tu(Dirichlet(std::vector<double>(k, 1.0)), seed);
  TrialOutcome out;
  out.observed = {{"tu_q", estimate_json(t)}, {"tu_uniform_dirichlet", estimate_json(uniform)}};
  Comparisons c;
  c.add(excess(t.value, uniform.value), tol.allowed({t, uniform}));
  if (m.tu_bound) {
    if (const auto bound = m.tu_bound(k)) {
      out.observed["tu_bound"] = *bound;
      c.add(mismatch(uniform.value, *bound), tol.allowed({uniform}));
    }
  }
  c.fill(out);
  return out;
}

TrialOutcome evaluate_a5(const MeasureTriple& m, const Json& in, const Tolerance& tol) {
  const SecondOrder q = distribution_from_json(in.at("q"));
  const std::uint64_t seed = trial_seed(in);
  SecondOrder spread = q;
  if (in.at("kind") == "ensemble_spread") {
    spread = mean_preserving_spread(std::get<Ensemble>(q), in.at("magnitude").get<double>(),
                                    in.at("spread_seed").get<std::uint64_t>());
  } else {
    const auto& dir = std::get<Dirichlet>(q);
    std::vector<double> alpha(dir.alpha().begin(), dir.alpha().end());
    for (double& a : alpha) a *= in.at("scale").get<double>();
    spread = Dirichlet(std::move(alpha));
  }
  const Estimate before = m.eu(q, seed);
  const Estimate after = m.eu(spread, seed);
  TrialOutcome out;
  out.observed = {{"eu_q", estimate_json(before)}, {"eu_spread", estimate_json(after)}};
  Comparisons c;
  c.add(excess(before.value, after.value), tol.allowed({before, after}));
  c.fill(out);
  return out;
}

TrialOutcome evaluate_a6(const MeasureTriple& m, const Json& in, const Tolerance& tol) {
  const Ensemble q = std::get<Ensemble>(distribution_from_json(in.at("q")));
  const std::vector<double> z = in.at("z").get<std::vector<double>>();
  const std::uint64_t seed = trial_seed(in);
  const Ensemble shifted = spread_preserving_shift(q, z);
  const Estimate before = m.eu(q, seed);
  const Estimate after = m.eu(shifted, seed);
  TrialOutcome out;
  out.observed = {{"eu_q", estimate_json(before)}, {"eu_shifted", estimate_json(after)}};
  Comparisons c;
  c.add(mismatch(before.value, after.value), tol.allowed({before, after}));
  c.fill(out);
  return out;
}

TrialOutcome evaluate_a7(const MeasureTriple& m, const Json& in, const Tolerance& tol) {
  const SecondOrder q = distribution_from_json(in.at("q"));
  const std::uint64_t seed = trial_seed(in);
  const std::vector<std::size_t> block = block_from(in);
  const std::vector<std::size_t> rest = complement(label_count(q), block);
  const Estimate whole = m.tu(q, seed);
  const Estimate first = m.tu_restricted(restrict_labels(q, block), seed);
  const Estimate second = m.tu_restricted(restrict_labels(q, rest), seed);
  TrialOutcome out;
  out.observed = {{"tu_q", estimate_json(whole)},
                  {"tu_block", estimate_json(first)},
                  {"tu_complement", estimate_json(second)}};
  const double sum = first.value + second.value;
  Comparisons c;
  c.add(excess(whole.value, sum), tol.allowed({whole, first, second}));
  c.fill(out);
  return out;
}

TrialOutcome evaluate_a8(const MeasureTriple& m, const Json& in, const Tolerance& tol) {
  const SecondOrder q = distribution_from_json(in.at("q"));
  const std::uint64_t seed = trial_seed(in);
  const std::vector<std::size_t> block = block_from(in);
  const std::vector<std::size_t> rest = complement(label_count(q), block);
  const Restricted first = restrict_labels(q, block);
  const Restricted second = restrict_labels(q, rest);
  const Restricted joint = product(first, second);
  const Estimate whole = m.tu(q, seed);
  const Estimate t1 = m.tu_restricted(first, seed);
  const Estimate t2 = m.tu_restricted(second, seed);
  const Estimate tp = m.tu_restricted(joint, seed);
  const double additive = tp.value - (t1.value + t2.value);

  TrialOutcome out;
  out.observed = {{"tu_q", estimate_json(whole)},
                  {"tu_block", estimate_json(t1)},
                  {"tu_complement", estimate_json(t2)},
                  {"tu_product", estimate_json(tp)},
                  {"additive_deviation", number_to_json(additive)}};
  Comparisons c;
  if (m.tu_mean_only) {
    // The product of the two restrictions has the concatenated block means
    // as its mean, so a mean-only TU must give TU(Q) on it.
    const std::vector<double> joint_mean = mean(joint);
    std::vector<double> expected = mean(first);
    const std::vector<double> second_mean = mean(second);
    expected.insert(expected.end(), second_mean.begin(), second_mean.end());
    double mean_gap = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      mean_gap = std::max(mean_gap, std::abs(joint_mean[i] - expected[i]));
    }
    c.add(mean_gap, tol.exact);
    c.add(mismatch(tp.value, whole.value), tol.allowed({tp, whole}));
  } else {
    c.add(mismatch(tp.value, t1.value + t2.value), tol.allowed({tp, t1, t2}));
  }
  c.fill(out);
  return out;
}

}  // namespace

std::string_view to_string(Axiom a) {
  static constexpr std::string_view names[] = {"A0", "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"};
  return names[axiom_index(a)];
}

Axiom axiom_from_string(std::string_view name) {
  for (Axiom a : kAllAxioms) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown axiom '" + std::string(name) + "'");
}

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::not_applicable:
      return "not_applicable";
  }
  return "unknown";
}

MeasureTriple distance_triple(const EuSolverConfig& cfg) {
  MeasureTriple m;
  m.family = "distance";
  m.tu = [](const SecondOrder& q, std::uint64_t) { return Estimate{tu(q), 0.0}; };
  m.au = [cfg](const SecondOrder& q, std::uint64_t seed) { return au(q, cfg, seed); };
  m.eu = [cfg](const SecondOrder& q, std::uint64_t) { return Estimate{eu(q, cfg).value, 0.0}; };
  m.tu_restricted = [](const Restricted& q, std::uint64_t) { return Estimate{tu(q), 0.0}; };
  m.tu_bound = [](std::size_t k) -> std::optional<double> {
    return (static_cast<double>(k) - 1.0) / static_cast<double>(k);
  };
  m.tu_mean_only = true;
  return m;
}

MeasureTriple entropy_triple(const EuSolverConfig& cfg) {
  MeasureTriple m;
  m.family = "entropy";
  m.tu = [](const SecondOrder& q, std::uint64_t) { return Estimate{entropy_tu(q), 0.0}; };
  m.au = [cfg](const SecondOrder& q, std::uint64_t seed) { return entropy_au(q, cfg, seed); };
  m.eu = [cfg](const SecondOrder& q, std::uint64_t seed) { return entropy_eu(q, cfg, seed); };
  m.tu_restricted = [](const Restricted& q, std::uint64_t) { return Estimate{entropy_tu(q), 0.0}; };
  m.tu_bound = [](std::size_t k) -> std::optional<double> { return std::log2(static_cast<double>(k)); };
  m.tu_mean_only = true;
  return m;
}

MeasureTriple cross_entropy_triple(const EuSolverConfig& cfg) {
  MeasureTriple m;
  m.family = "cross_entropy";
  m.tu = [cfg](const SecondOrder& q, std::uint64_t seed) { return ce_tu(q, cfg, seed); };
  m.au = [cfg](const SecondOrder& q, std::uint64_t seed) { return entropy_au(q, cfg, seed); };
  m.eu = [cfg](const SecondOrder& q, std::uint64_t seed) { return ce_eu(q, cfg, seed); };
  m.tu_restricted = [cfg](const Restricted& q, std::uint64_t seed) { return ce_tu(q, cfg, seed); };
  m.tu_bound = [](std::size_t) -> std::optional<double> { return std::nullopt; };
  m.tu_mean_only = false;
  return m;
}

MeasureTriple triple_by_name(std::string_view family, const EuSolverConfig& cfg) {
  if (family == "distance") return distance_triple(cfg);
  if (family == "entropy") return entropy_triple(cfg);
  if (family == "cross_entropy") return cross_entropy_triple(cfg);
  throw std::invalid_argument("unknown measure family '" + std::string(family) + "'");
}

double Tolerance::allowed(std::initializer_list<Estimate> values) const {
  double variance = 0.0;
  bool exact_path = true;
  for (const Estimate& e : values) {
    if (e.std_error > 0.0) exact_path = false;
    variance += e.std_error * e.std_error;
  }
  if (exact_path) return exact;
  return std::max(mc_floor, mc_sigmas * std::sqrt(variance));
}

Json Counterexample::to_json() const {
  return Json{{"axiom", std::string(souq::to_string(axiom))},
              {"family", family},
              {"inputs", inputs},
              {"observed", observed},
              {"tolerance", tolerance},
              {"gap", number_to_json(gap)}};
}

Counterexample Counterexample::from_json(const Json& j) {
  Counterexample c;
  c.axiom = axiom_from_string(j.at("axiom").get<std::string>());
  c.family = j.at("family").get<std::string>();
  c.inputs = j.at("inputs");
  c.observed = j.value("observed", Json::object());
  c.tolerance = j.at("tolerance").get<double>();
  c.gap = number_from_json(j.at("gap"));
  return c;
}

Json AxiomCheckResult::to_json() const {
  return Json{{"axiom", std::string(souq::to_string(axiom))},
              {"status", std::string(souq::to_string(status))},
              {"trials", trials},
              {"violations", violations},
              {"skipped", skipped},
              {"notes", notes},
              {"counterexample", counterexample ? counterexample->to_json() : Json(nullptr)}};
}

std::optional<Json> generate_trial(Axiom axiom, Rng& rng) {
  const std::size_t k = random_label_count(rng);
  const std::uint64_t seed = rng.next_u64();
  switch (axiom) {
    case Axiom::A0:
    case Axiom::A3:
      return Json{{"q", distribution_to_json(random_second_order(k, rng))}, {"seed", seed}};
    case Axiom::A1:
      return Json{{"p", random_categorical(k, rng)}, {"y", rng.index(k)}, {"seed", seed}};
    case Axiom::A2:
      if (rng.uniform() < 0.5) {
        return Json{{"kind", "dirac_mixture"},
                    {"q", distribution_to_json(random_dirac_mixture(k, rng))},
                    {"seed", seed}};
      }
      return Json{{"kind", "lower"},
                  {"q", distribution_to_json(random_second_order(k, rng))},
                  {"p", random_categorical(k, rng)},
                  {"seed", seed}};
    case Axiom::A4: {
      const SecondOrder q = rng.uniform() < 0.2 ? SecondOrder(random_dirac_mixture(k, rng))
                                                : random_second_order(k, rng);
      return Json{{"q", distribution_to_json(q)}, {"seed", seed}};
    }
    case Axiom::A5:
      if (rng.uniform() < 0.5) {
        return Json{{"kind", "dirichlet_concentration"},
                    {"q", distribution_to_json(random_dirichlet(k, rng))},
                    {"scale", 0.1 + 0.8 * rng.uniform()},
                    {"seed", seed}};
      }
      return Json{{"kind", "ensemble_spread"},
                  {"q", distribution_to_json(random_ensemble(k, kMaxAtoms, rng))},
                  {"magnitude", log_uniform(rng, 0.01, 0.5)},
                  {"spread_seed", rng.next_u64()},
                  {"seed", seed}};
    case Axiom::A6:
      for (int attempt = 0; attempt < 10; ++attempt) {
        const Ensemble q = random_ensemble(k, kMaxAtoms, rng);
        if (const auto z = random_feasible_shift(q, rng)) {
          return Json{{"q", distribution_to_json(q)}, {"z", *z}, {"seed", seed}};
        }
      }
      return std::nullopt;
    case Axiom::A7:
      return Json{{"q", distribution_to_json(random_second_order(k, rng))},
                  {"block", block_json(random_block(k, rng))},
                  {"seed", seed}};
    case Axiom::A8:
      return Json{{"q", distribution_to_json(random_ensemble(k, kMaxProductAtoms, rng))},
                  {"block", block_json(random_block(k, rng))},
                  {"seed", seed}};
  }
  return std::nullopt;
}

TrialOutcome evaluate_trial(Axiom axiom, const MeasureTriple& triple, const Json& input,
                            const Tolerance& tol) {
  switch (axiom) {
    case Axiom::A0:
      return evaluate_a0(triple, input, tol);
    case Axiom::A1:
      return evaluate_a1(triple, input, tol);
    case Axiom::A2:
      return evaluate_a2(triple, input, tol);
    case Axiom::A3:
      return evaluate_a3(triple, input, tol);
    case Axiom::A4:
      return evaluate_a4(triple, input, tol);
    case Axiom::A5:
      return evaluate_a5(triple, input, tol);
    case Axiom::A6:
      return evaluate_a6(triple, input, tol);
    case Axiom::A7:
      return evaluate_a7(triple, input, tol);
    case Axiom::A8:
      return evaluate_a8(triple, input, tol);
  }
  throw std::logic_error("unhandled axiom");
}

AxiomCheckResult check_axiom(Axiom axiom, const MeasureTriple& triple, std::size_t trials,
                             std::uint64_t seed, const Tolerance& tol) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  AxiomCheckResult result;
  result.axiom = axiom;
  result.trials = trials;
  Rng rng(seed, axiom_index(axiom) + 1);
  double worst_gap = 0.0;
  double max_additive = 0.0;
  std::string first_error;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::optional<Json> input = generate_trial(axiom, rng);
    if (!input) {
      ++result.skipped;
      continue;
    }
    TrialOutcome outcome;
    try {
      outcome = evaluate_trial(axiom, triple, *input, tol);
    } catch (const std::exception& e) {
      ++result.skipped;
      if (first_error.empty()) first_error = e.what();
      continue;
    }
    if (axiom == Axiom::A8) {
      max_additive = std::max(max_additive,
                              std::abs(number_from_json(outcome.observed.at("additive_deviation"))));
    }
    if (outcome.violated) {
      ++result.violations;
      if (!result.counterexample || outcome.gap > worst_gap) {
        worst_gap = outcome.gap;
        result.counterexample =
            Counterexample{axiom, triple.family, *input, outcome.observed, outcome.tolerance, outcome.gap};
      }
    }
  }

  std::ostringstream notes;
  if (result.violations > 0) {
    result.status = CheckStatus::fail;
    notes << result.violations << " of " << trials << " trials violated; largest gap "
          << format_number(worst_gap);
  } else if (result.skipped == trials) {
    result.status = CheckStatus::not_applicable;
    notes << "no feasible input generated";
  } else {
    result.status = CheckStatus::pass;
    notes << trials - result.skipped << " trials checked";
  }
  if (result.skipped > 0) notes << "; " << result.skipped << " skipped";
  if (!first_error.empty()) notes << " (first error: " << first_error << ")";
  if (axiom == Axiom::A8) {
    notes << "; restrictions are not renormalized";
    if (triple.tu_mean_only) {
      notes << "; checked as TU(Q1 x Q2) = TU(Q) since TU depends on the mean only";
    }
    notes << "; max |TU(Q1 x Q2) - TU(Q1) - TU(Q2)| = " << format_number(max_additive);
  }
  result.notes = notes.str();
  return result;
}

std::vector<AxiomCheckResult> run_suite(const MeasureTriple& triple, std::size_t trials,
                                        std::uint64_t seed, const Tolerance& tol) {
  std::vector<AxiomCheckResult> results;
  for (Axiom a : kAllAxioms) {
    results.push_back(check_axiom(a, triple, trials, derive_seed(seed, axiom_index(a)), tol));
  }
  return results;
}

std::optional<Counterexample> find_violation_witness(const MeasureTriple& triple, Axiom axiom,
                                                     std::size_t budget, std::uint64_t seed,
                                                     const Tolerance& tol) {
  if (budget == 0) throw std::invalid_argument("budget must be positive");
  Rng rng(seed, 100 + axiom_index(axiom));
  std::optional<Counterexample> best;
  std::size_t used = 0;
  while (used < budget && !best) {
    ++used;
    const std::optional<Json> input = generate_trial(axiom, rng);
    if (!input) continue;
    try {
      const TrialOutcome outcome = evaluate_trial(axiom, triple, *input, tol);
      if (outcome.violated) {
        best = Counterexample{axiom, triple.family, *input, outcome.observed, outcome.tolerance,
                              outcome.gap};
      }
    } catch (const std::exception&) {
    }
  }
  if (!best) return std::nullopt;

  const std::size_t steps = std::min(budget - used, kPerturbationSteps);
  for (std::size_t s = 0; s < steps && !std::isinf(best->gap); ++s) {
    try {
      const Json candidate = perturb_trial(axiom, best->inputs, rng);
      const TrialOutcome outcome = evaluate_trial(axiom, triple, candidate, tol);
      if (outcome.violated && outcome.gap > best->gap) {
        best = Counterexample{axiom, triple.family, candidate, outcome.observed, outcome.tolerance,
                              outcome.gap};
      }
    } catch (const std::exception&) {
    }
  }
  return best;
}

TrialOutcome replay(const Counterexample& witness, const MeasureTriple& triple, const Tolerance& tol) {
  return evaluate_trial(witness.axiom, triple, witness.inputs, tol);
}

}  // namespace souq
