#include "souq/app.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace souq {

namespace {

const std::vector<std::string> kFamilies = {"distance", "entropy", "cross_entropy"};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

void validate_measures(const RunConfig& cfg) {
  if (cfg.measures.empty()) throw ConfigError("--measures must name at least one family");
  for (const auto& m : cfg.measures) {
    if (std::find(kFamilies.begin(), kFamilies.end(), m) == kFamilies.end()) {
      throw ConfigError("unknown measure family '" + m + "' (expected distance, entropy or cross_entropy)");
    }
  }
}

EuSolverConfig solver_config(const RunConfig& cfg, bool apply_tol) {
  EuSolverConfig solver;
  solver.mc_samples = cfg.samples;
  if (apply_tol && cfg.tol) solver.lambda_tol = *cfg.tol;
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return solver;
}

std::uint64_t require_seed(const RunConfig& cfg, const char* why) {
  if (!cfg.seed) throw ConfigError(std::string("--seed is required ") + why);
  return *cfg.seed;
}

// Seed for the Monte-Carlo paths; inputs that are all ensembles run exactly
// and need none.
std::uint64_t seed_for_inputs(const RunConfig& cfg, const std::vector<NamedDistribution>& inputs) {
  const bool any_dirichlet = std::any_of(inputs.begin(), inputs.end(), [](const auto& d) {
    return std::holds_alternative<Dirichlet>(d.distribution);
  });
  if (any_dirichlet) return require_seed(cfg, "for Dirichlet inputs (Monte-Carlo estimates)");
  return cfg.seed.value_or(0);
}

std::vector<FigurePanel> parse_panels(const std::string& spec) {
  const auto first = spec.find_first_not_of(" \t\r\n");
  const std::string text =
      first != std::string::npos && spec[first] == '[' ? spec : read_file(spec);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed --panels JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty()) throw ParseError("--panels: expected a nonempty array");
  std::vector<FigurePanel> panels;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const Json& entry = doc[i];
    const std::string path = "panels[" + std::to_string(i) + "]";
    FigurePanel panel{"panel" + std::to_string(i), {}};
    const Json* alpha = &entry;
    if (entry.is_object()) {
      if (entry.contains("id")) panel.id = entry["id"].get<std::string>();
      if (!entry.contains("alpha")) throw ParseError(path + ".alpha: missing");
      alpha = &entry["alpha"];
    }
    if (!alpha->is_array()) throw ParseError(path + ": expected an alpha array");
    for (const auto& v : *alpha) {
      if (!v.is_number()) throw ParseError(path + ": alpha entries must be numbers");
      panel.alpha.push_back(v.get<double>());
    }
    panels.push_back(std::move(panel));
  }
  return panels;
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

Json opt_json(const std::optional<double>& v) { return v ? number_to_json(*v) : Json(nullptr); }

std::string compare_to_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  out << "id,family,tu,au,eu,residual,mc_stderr\n";
  for (const auto& r : rows) {
    out << csv_escape(r.id) << ',' << r.family << ',' << format_number(r.tu) << ','
        << format_number(r.au) << ',' << format_number(r.eu) << ',' << format_number(r.residual)
        << ',' << opt_number(r.mc_stderr) << '\n';
  }
  return out.str();
}

Json compare_to_json(const std::vector<CompareRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back({{"id", r.id},
                   {"family", r.family},
                   {"tu", number_to_json(r.tu)},
                   {"au", number_to_json(r.au)},
                   {"eu", number_to_json(r.eu)},
                   {"residual", number_to_json(r.residual)},
                   {"mc_stderr", opt_json(r.mc_stderr)}});
  }
  return out;
}

std::string axioms_to_csv(const std::vector<SuiteReport>& reports) {
  std::ostringstream out;
  out << "family,axiom,status,trials,violations,skipped,notes\n";
  for (const auto& rep : reports) {
    for (const auto& r : rep.results) {
      out << rep.family << ',' << to_string(r.axiom) << ',' << to_string(r.status) << ','
          << r.trials << ',' << r.violations << ',' << r.skipped << ',' << csv_escape(r.notes)
          << '\n';
    }
  }
  return out.str();
}

Json axioms_to_json(const std::vector<SuiteReport>& reports) {
  Json out = Json::array();
  for (const auto& rep : reports) {
    Json results = Json::array();
    for (const auto& r : rep.results) results.push_back(r.to_json());
    out.push_back({{"family", rep.family}, {"results", results}});
  }
  return out;
}

std::string grid_file_name(const FigurePanel& panel) { return panel.id + ".csv"; }

std::string figure_to_csv(const std::vector<FigurePanelResult>& panels) {
  std::ostringstream out;
  out << "id,alpha,K,tu,au,eu,mc_stderr,grid_file,note\n";
  for (const auto& p : panels) {
    std::string alpha;
    for (std::size_t i = 0; i < p.panel.alpha.size(); ++i) {
      if (i > 0) alpha += ';';
      alpha += format_number(p.panel.alpha[i]);
    }
    out << csv_escape(p.panel.id) << ',' << alpha << ',' << p.report.k << ','
        << format_number(p.report.tu) << ',' << format_number(p.report.au) << ','
        << format_number(p.report.eu) << ',' << opt_number(p.report.mc_stderr) << ','
        << (p.grid_csv ? grid_file_name(p.panel) : "") << ',' << csv_escape(p.note) << '\n';
  }
  return out.str();
}

Json figure_to_json(const std::vector<FigurePanelResult>& panels) {
  Json out = Json::array();
  for (const auto& p : panels) {
    out.push_back({{"id", p.panel.id},
                   {"alpha", p.panel.alpha},
                   {"K", p.report.k},
                   {"tu", number_to_json(p.report.tu)},
                   {"au", number_to_json(p.report.au)},
                   {"eu", number_to_json(p.report.eu)},
                   {"normalized", p.report.normalized},
                   {"mc_stderr", opt_json(p.report.mc_stderr)},
                   {"grid_file", p.grid_csv ? Json(grid_file_name(p.panel)) : Json(nullptr)},
                   {"note", p.note}});
  }
  return out;
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path) {
    write_file(*cfg.out_path, text);
  } else {
    out << text;
  }
}

}  // namespace

std::vector<NamedDistribution> load_inputs(const RunConfig& cfg) {
  if (cfg.input_path && cfg.inline_spec) throw ConfigError("use only one of --input and --inline");
  if (cfg.input_path) return parse_distributions(read_file(*cfg.input_path));
  if (cfg.inline_spec) return parse_distributions(*cfg.inline_spec);
  throw ConfigError("one of --input or --inline is required");
}

std::vector<ReportRow> cmd_measure(const RunConfig& cfg) {
  validate_measures(cfg);
  const EuSolverConfig solver = solver_config(cfg, true);
  const auto inputs = load_inputs(cfg);
  const std::uint64_t seed = seed_for_inputs(cfg, inputs);
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& [id, q] = inputs[i];
    const std::uint64_t task_seed = derive_seed(seed, i);
    for (const auto& family : cfg.measures) {
      if (family == "distance") {
        UncertaintyReport report = measure(q, solver, task_seed);
        if (cfg.normalize) report = normalize(report, report.k);
        rows.push_back(to_row(id, report));
      } else if (family == "entropy") {
        rows.push_back(to_row(id, entropy_report(q, solver, task_seed)));
      } else {
        rows.push_back(to_row(id, cross_entropy_report(q, solver, task_seed)));
      }
    }
  }
  return rows;
}

std::vector<CompareRow> cmd_compare(const RunConfig& cfg) {
  std::vector<CompareRow> out;
  for (const ReportRow& r : cmd_measure(cfg)) {
    CompareRow row{r.id, r.family, r.tu, r.au, r.eu, 0.0, r.mc_stderr};
    const double parts = r.au + r.eu;
    row.residual = std::isinf(r.tu) && std::isinf(parts) ? 0.0 : r.tu - parts;
    out.push_back(row);
  }
  return out;
}

std::vector<SuiteReport> cmd_axioms(const RunConfig& cfg) {
  validate_measures(cfg);
  if (cfg.trials == 0) throw ConfigError("--trials must be positive");
  const std::uint64_t seed = require_seed(cfg, "for the axiom suite");
  const EuSolverConfig solver = solver_config(cfg, false);
  Tolerance tol;
  if (cfg.tol) {
    if (!(*cfg.tol > 0.0)) throw ConfigError("--tol must be positive");
    tol.exact = *cfg.tol;
  }
  std::vector<SuiteReport> reports;
  for (const auto& family : cfg.measures) {
    reports.push_back({family, run_suite(triple_by_name(family, solver), cfg.trials, seed, tol)});
  }
  return reports;
}

bool distance_suite_failed(const std::vector<SuiteReport>& reports) {
  for (const auto& rep : reports) {
    if (rep.family != "distance") continue;
    for (const auto& r : rep.results) {
      if (r.axiom != Axiom::A8 && r.status == CheckStatus::fail) return true;
    }
  }
  return false;
}

std::vector<FigurePanel> default_figure_panels() {
  return {{"uniform", {1.0, 1.0, 1.0}},
          {"center_spread", {5.0, 5.0, 5.0}},
          {"center_concentrated", {20.0, 20.0, 20.0}},
          {"vertex_concentrated", {48.0, 1.0, 1.0}},
          {"vertex_mixture", {0.1, 0.1, 0.1}},
          {"skewed", {6.0, 2.0, 2.0}}};
}

std::string density_grid_csv(const Dirichlet& q, std::size_t resolution) {
  if (q.size() != 3) throw std::invalid_argument("density grid needs K = 3");
  if (resolution < 2) throw std::invalid_argument("grid resolution must be at least 2");
  const auto alpha = q.alpha();
  double log_norm = log_gamma(q.alpha0());
  for (double a : alpha) log_norm -= log_gamma(a);
  const std::size_t n = resolution - 1;
  std::ostringstream out;
  out << "p1,p2,p3,density\n";
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; i + j <= n; ++j) {
      const std::size_t k = n - i - j;
      const double p[3] = {static_cast<double>(i) / static_cast<double>(n),
                           static_cast<double>(j) / static_cast<double>(n),
                           static_cast<double>(k) / static_cast<double>(n)};
      double log_density = log_norm;
      bool diverges = false;
      for (std::size_t y = 0; y < 3; ++y) {
        if (p[y] == 0.0 && alpha[y] < 1.0) diverges = true;
        if (alpha[y] != 1.0) log_density += (alpha[y] - 1.0) * std::log(p[y]);
      }
      const double density = diverges ? kInfinity : std::exp(log_density);
      out << format_number(p[0]) << ',' << format_number(p[1]) << ',' << format_number(p[2]) << ','
          << format_number(density) << '\n';
    }
  }
  return out.str();
}

std::vector<FigurePanelResult> cmd_figure(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg, "for the figure panels (Monte-Carlo AU)");
  const EuSolverConfig solver = solver_config(cfg, true);
  const std::vector<FigurePanel> panels = cfg.panels ? parse_panels(*cfg.panels) : default_figure_panels();
  std::vector<FigurePanelResult> results;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    FigurePanelResult r;
    r.panel = panels[i];
    const Dirichlet q(r.panel.alpha);
    const UncertaintyReport raw = measure(q, solver, derive_seed(seed, i));
    r.report = normalize(raw, raw.k);
    if (q.size() == 3) {
      r.grid_csv = density_grid_csv(q);
    } else {
      r.note = "density grid skipped: K = " + std::to_string(q.size()) + " is not 3";
    }
    results.push_back(std::move(r));
  }
  return results;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::measure: {
        const auto rows = cmd_measure(cfg);
        emit(cfg, cfg.format == OutputFormat::csv ? rows_to_csv(rows) : render(rows_to_json(rows)), out);
        return kExitOk;
      }
      case Command::compare: {
        const auto rows = cmd_compare(cfg);
        emit(cfg, cfg.format == OutputFormat::csv ? compare_to_csv(rows) : render(compare_to_json(rows)),
             out);
        return kExitOk;
      }
      case Command::axioms: {
        const auto reports = cmd_axioms(cfg);
        emit(cfg,
             cfg.format == OutputFormat::csv ? axioms_to_csv(reports) : render(axioms_to_json(reports)),
             out);
        if (distance_suite_failed(reports)) {
          err << "distance family failed one of A0-A7\n";
          return kExitAxiomFailure;
        }
        return kExitOk;
      }
      case Command::figure: {
        if (!cfg.out_path) throw ConfigError("--out is required for figure (output directory)");
        const auto panels = cmd_figure(cfg);
        const std::filesystem::path dir(*cfg.out_path);
        std::filesystem::create_directories(dir);
        for (const auto& p : panels) {
          if (p.grid_csv) write_file(dir / grid_file_name(p.panel), *p.grid_csv);
        }
        const std::string summary =
            cfg.format == OutputFormat::csv ? figure_to_csv(panels) : render(figure_to_json(panels));
        write_file(dir / (cfg.format == OutputFormat::csv ? "summary.csv" : "summary.json"), summary);
        out << summary;
        return kExitOk;
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace souq
