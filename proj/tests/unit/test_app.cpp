#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "souq/app.hpp"

using namespace souq;

namespace {

RunConfig inline_config(Command command, std::string spec) {
  RunConfig cfg;
  cfg.command = command;
  cfg.inline_spec = std::move(spec);
  cfg.samples = 20000;
  return cfg;
}

const CompareRow& find(const std::vector<CompareRow>& rows, const std::string& family) {
  for (const auto& r : rows) {
    if (r.family == family) return r;
  }
  throw std::runtime_error("missing family " + family);
}

}  // namespace

TEST_CASE("measure") {
  RunConfig cfg = inline_config(Command::measure, R"({"type":"dirichlet","alpha":[1,1,1]})");
  cfg.seed = 7;
  cfg.normalize = true;
  const auto rows = cmd_measure(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].tu == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rows[0].normalized);
  CHECK(rows[0].lambda_star.has_value());
  CHECK(rows[0].q_star.has_value());

  const auto e = cmd_measure(inline_config(Command::measure, R"({"type":"ensemble","atoms":[[1,0],[0,1]]})"));
  REQUIRE(e.size() == 1);
  CHECK(e[0].eu == 0.5);
  CHECK(!e[0].normalized);
}

TEST_CASE("configuration errors") {
  RunConfig missing_seed = inline_config(Command::measure, R"({"type":"dirichlet","alpha":[1,1]})");
  CHECK_THROWS_AS(cmd_measure(missing_seed), ConfigError);
  CHECK_THROWS_AS(cmd_measure(inline_config(Command::measure, R"({"type":"ensemble","atoms":[]})")),
                  ParseError);
  RunConfig none;
  CHECK_THROWS_AS(cmd_measure(none), ConfigError);
  RunConfig both = inline_config(Command::measure, R"({"type":"dirichlet","alpha":[1,1]})");
  both.input_path = "x.json";
  CHECK_THROWS_AS(cmd_measure(both), ConfigError);
  RunConfig bad_family = inline_config(Command::measure, R"({"type":"ensemble","atoms":[[1,0]]})");
  bad_family.measures = {"variance"};
  CHECK_THROWS_AS(cmd_measure(bad_family), ConfigError);
  RunConfig no_file;
  no_file.input_path = "/nonexistent/input.json";
  CHECK_THROWS_AS(cmd_measure(no_file), ConfigError);

  RunConfig axioms;
  axioms.command = Command::axioms;
  CHECK_THROWS_AS(cmd_axioms(axioms), ConfigError);
  axioms.seed = 1;
  axioms.trials = 0;
  CHECK_THROWS_AS(cmd_axioms(axioms), ConfigError);

  std::ostringstream out;
  std::ostringstream err;
  CHECK(run(missing_seed, out, err) == kExitConfigError);
  CHECK(err.str().find("--seed") != std::string::npos);
}

TEST_CASE("compare") {
  RunConfig cfg = inline_config(Command::compare, R"({"type":"ensemble","atoms":[[1,0],[0,1]]})");
  cfg.measures = {"distance", "entropy", "cross_entropy"};
  const auto rows = cmd_compare(cfg);
  REQUIRE(rows.size() == 3);
  CHECK(find(rows, "distance").eu == 0.5);
  CHECK(find(rows, "entropy").eu == doctest::Approx(1.0));
  CHECK(std::isinf(find(rows, "cross_entropy").eu));
  CHECK(find(rows, "cross_entropy").residual == 0.0);
  CHECK(find(rows, "entropy").residual == doctest::Approx(0.0).epsilon(1e-12));

  RunConfig dirac = inline_config(Command::compare, R"({"type":"ensemble","atoms":[[0.3,0.7]]})");
  dirac.measures = cfg.measures;
  for (const auto& r : cmd_compare(dirac)) CHECK(r.eu == doctest::Approx(0.0).epsilon(1e-15));

  RunConfig uniform = inline_config(Command::compare, R"({"type":"dirichlet","alpha":[1,1]})");
  uniform.measures = {"distance", "entropy"};
  uniform.seed = 3;
  uniform.samples = 200000;
  const auto d = cmd_compare(uniform);
  CHECK(find(d, "distance").tu == 0.5);
  CHECK(find(d, "distance").au == doctest::Approx(0.25).epsilon(0.01));
  CHECK(find(d, "distance").eu == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(find(d, "entropy").au == doctest::Approx(0.7213).epsilon(1e-4));
  CHECK(find(d, "entropy").eu == doctest::Approx(0.2787).epsilon(0.01));
}

TEST_CASE("run output is reproducible") {
  RunConfig cfg = inline_config(Command::measure, R"([{"type":"dirichlet","alpha":[2,3]},{"type":"dirichlet","alpha":[0.5,0.5,4]}])");
  cfg.seed = 11;
  cfg.measures = {"distance", "entropy"};
  for (OutputFormat f : {OutputFormat::json, OutputFormat::csv}) {
    cfg.format = f;
    std::ostringstream a;
    std::ostringstream b;
    std::ostringstream err;
    CHECK(run(cfg, a, err) == kExitOk);
    CHECK(run(cfg, b, err) == kExitOk);
    CHECK(a.str() == b.str());
    if (f == OutputFormat::csv) CHECK(rows_from_csv(a.str()).size() == 4);
    else CHECK(rows_from_json(Json::parse(a.str())).size() == 4);
  }
}

TEST_CASE("axioms command") {
  RunConfig cfg;
  cfg.command = Command::axioms;
  cfg.seed = 5;
  cfg.trials = 20;
  cfg.samples = 5000;
  cfg.measures = {"distance", "entropy"};
  const auto reports = cmd_axioms(cfg);
  REQUIRE(reports.size() == 2);
  CHECK(!distance_suite_failed(reports));
  std::ostringstream out;
  std::ostringstream err;
  CHECK(run(cfg, out, err) == kExitOk);
  const Json j = Json::parse(out.str());
  CHECK(j.is_array());
  CHECK(j.size() == 2);

  std::vector<SuiteReport> failed = {{"distance", {AxiomCheckResult{}}}};
  failed[0].results[0].status = CheckStatus::fail;
  CHECK(distance_suite_failed(failed));
  failed[0].results[0].axiom = Axiom::A8;
  CHECK(!distance_suite_failed(failed));
}

TEST_CASE("figure panels") {
  RunConfig cfg;
  cfg.command = Command::figure;
  cfg.seed = 1;
  cfg.samples = 20000;
  const auto panels = cmd_figure(cfg);
  REQUIRE(panels.size() == default_figure_panels().size());
  double max_tu = 0.0;
  for (const auto& p : panels) {
    CHECK(p.report.normalized);
    CHECK(p.grid_csv.has_value());
    max_tu = std::max(max_tu, p.report.tu);
  }
  CHECK(panels[0].report.tu == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(max_tu == panels[0].report.tu);

  cfg.panels = "[[1,1],[2,2,2,2]]";
  const auto custom = cmd_figure(cfg);
  REQUIRE(custom.size() == 2);
  CHECK(!custom[0].grid_csv.has_value());
  CHECK(!custom[0].note.empty());

  RunConfig no_out = cfg;
  std::ostringstream out;
  std::ostringstream err;
  CHECK(run(no_out, out, err) == kExitConfigError);

  const auto dir = std::filesystem::temp_directory_path() / "souq_test_figure";
  std::filesystem::remove_all(dir);
  RunConfig with_out;
  with_out.command = Command::figure;
  with_out.seed = 1;
  with_out.samples = 5000;
  with_out.out_path = dir.string();
  CHECK(run(with_out, out, err) == kExitOk);
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(std::filesystem::exists(dir / "uniform.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("density grid") {
  const std::string grid = density_grid_csv(Dirichlet({1, 1, 1}), 3);
  std::istringstream in(grid);
  std::string line;
  std::getline(in, line);
  CHECK(line == "p1,p2,p3,density");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(parse_number(line.substr(line.rfind(',') + 1)) == doctest::Approx(2.0).epsilon(1e-12));
  }
  CHECK(rows == 6);
  const std::string sparse = density_grid_csv(Dirichlet({0.5, 2, 2}), 3);
  CHECK(sparse.find("inf") != std::string::npos);
  CHECK_THROWS_AS(density_grid_csv(Dirichlet({1, 1}), 3), std::invalid_argument);
}
