#pragma once

// Commands behind the souq command-line tool. Each takes a RunConfig and
// returns structured results; run() adds input loading, serialization,
// output files and exit codes.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "souq/axioms.hpp"
#include "souq/io.hpp"

namespace souq {

/// Invalid command-line configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { measure, compare, axioms, figure };
enum class OutputFormat { json, csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitAxiomFailure = 2;

struct RunConfig {
  Command command = Command::measure;
  std::optional<std::string> input_path;
  std::optional<std::string> inline_spec;
  /// Subset of {"distance", "entropy", "cross_entropy"}.
  std::vector<std::string> measures = {"distance"};
  std::size_t samples = 100000;
  std::optional<std::uint64_t> seed;
  bool normalize = false;
  /// Solver tolerance for measure/compare/figure, exact-path tolerance for axioms.
  std::optional<double> tol;
  OutputFormat format = OutputFormat::json;
  std::optional<std::string> out_path;
  std::size_t trials = 1000;
  /// Figure panels: inline JSON array of alpha vectors or a path to one.
  std::optional<std::string> panels;
};

/// Reads the distributions named by --input or --inline.
std::vector<NamedDistribution> load_inputs(const RunConfig& cfg);

std::vector<ReportRow> cmd_measure(const RunConfig& cfg);

struct CompareRow {
  std::string id;
  std::string family;
  double tu = 0.0;
  double au = 0.0;
  double eu = 0.0;
  /// TU - AU - EU; zero for additive decompositions.
  double residual = 0.0;
  std::optional<double> mc_stderr;
};

std::vector<CompareRow> cmd_compare(const RunConfig& cfg);

struct SuiteReport {
  std::string family;
  std::vector<AxiomCheckResult> results;
};

std::vector<SuiteReport> cmd_axioms(const RunConfig& cfg);

/// True when the distance family failed one of A0-A7.
bool distance_suite_failed(const std::vector<SuiteReport>& reports);

struct FigurePanel {
  std::string id;
  std::vector<double> alpha;
};

struct FigurePanelResult {
  FigurePanel panel;
  /// Normalized distance-based measures.
  UncertaintyReport report;
  /// Density grid as CSV (p1,p2,p3,density); absent unless K = 3.
  std::optional<std::string> grid_csv;
  std::string note;
};

inline constexpr std::size_t kFigureResolution = 201;

/// Uniform, two centered panels of different concentration (a mean-preserving
/// spread pair), concentrated near a vertex, near-vertex mixture, skewed.
std::vector<FigurePanel> default_figure_panels();

/// Dirichlet density on the barycentric lattice with `resolution` points per
/// edge; "inf" where the density diverges on the boundary.
std::string density_grid_csv(const Dirichlet& q, std::size_t resolution = kFigureResolution);

std::vector<FigurePanelResult> cmd_figure(const RunConfig& cfg);

/// Full command execution: output to `out` or the --out path, diagnostics
/// to `err`, returns the process exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace souq
