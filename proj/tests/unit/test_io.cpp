#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "souq/io.hpp"

using namespace souq;

namespace {

std::string parse_error(std::string_view text) {
  try {
    parse_distributions(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

ReportRow sample_row() {
  ReportRow row;
  row.id = "a,\"b\"";
  row.family = "distance";
  row.k = 3;
  row.tu = 2.0 / 3.0;
  row.au = 0.1 + 0.2;
  row.eu = 1e-17;
  row.normalized = true;
  row.estimator = Estimator::lagrangian;
  row.mc_stderr = 3.5e-4;
  row.lambda_star = -1.0 / 18.0;
  row.q_star = std::vector<double>{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return row;
}

}  // namespace

TEST_CASE("single distributions") {
  const auto d = parse_distributions(R"({"type":"dirichlet","alpha":[1,2,3]})");
  REQUIRE(d.size() == 1);
  CHECK(d[0].id == "d0");
  CHECK(std::get<Dirichlet>(d[0].distribution) == Dirichlet({1, 2, 3}));

  const auto e = parse_distributions(R"({"type":"ensemble","atoms":[[1,0],[0.5,0.5]],"id":"x"})");
  REQUIRE(e.size() == 1);
  CHECK(e[0].id == "x");
  const auto& ens = std::get<Ensemble>(e[0].distribution);
  CHECK(ens.count() == 2);
  CHECK(ens.weights()[0] == 0.5);
}

TEST_CASE("batches") {
  const auto a = parse_distributions(
      R"([{"type":"dirichlet","alpha":[1,1]},{"type":"ensemble","atoms":[[0.2,0.8]],"weights":[1]}])");
  REQUIRE(a.size() == 2);
  CHECK(a[1].id == "d1");
  const auto w = parse_distributions(R"({"distributions":[{"type":"dirichlet","alpha":[2,2],"id":"q"}]})");
  REQUIRE(w.size() == 1);
  CHECK(w[0].id == "q");
}

TEST_CASE("parse diagnostics") {
  CHECK(contains(parse_error("{\n  \"type\": \"dirichlet\",\n  \"alpha\": [1, 2,]\n}"), "line 3"));
  CHECK(contains(parse_error(R"({"distributions":[{"type":"dirichlet","alpha":[1,-1]}]})"),
                 "$.distributions[0]"));
  CHECK(contains(parse_error(R"({"distributions":[{"type":"dirichlet","alpha":[1,-1]}]})"), "alpha"));
  CHECK(contains(parse_error(R"({"type":"ensemble","atoms":[]})"), "$.atoms"));
  CHECK(contains(parse_error(R"({"type":"ensemble","atoms":[[0.5,0.6]]})"), "$.atoms[0]"));
  CHECK(contains(parse_error(R"({"type":"ensemble","atoms":[[1,0],[0,1]],"weights":[0.5]})"), "weights"));
  CHECK(contains(parse_error(R"({"type":"gaussian"})"), "unknown distribution type"));
  CHECK(contains(parse_error(R"({"alpha":[1,1]})"), "$.type"));
  CHECK(contains(parse_error(R"({"type":"dirichlet","alpha":[1,"x"]})"), "$.alpha[1]"));
  CHECK(contains(parse_error(R"({"type":"dirichlet","alpha":[1]})"), "$"));
  CHECK(contains(parse_error(R"([])"), "no distributions"));
  CHECK(contains(parse_error(R"([{"type":"dirichlet","alpha":[1,1],"id":3}])"), "$[0].id"));
  CHECK(!parse_error("").empty());
}

TEST_CASE("distribution json round trip") {
  const SecondOrder d = Dirichlet({0.5, 2.25, 7});
  CHECK(std::get<Dirichlet>(distribution_from_json(distribution_to_json(d))) == std::get<Dirichlet>(d));
  const SecondOrder e = Ensemble({Categorical({0.1, 0.9}), Categorical({0.7, 0.3})}, {0.25, 0.75});
  CHECK(std::get<Ensemble>(distribution_from_json(distribution_to_json(e))) == std::get<Ensemble>(e));
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(kInfinity) == "inf");
  CHECK(format_number(-kInfinity) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  for (double v : {1.0 / 3.0, 1e-300, 6.02e23, -0.0, 0.1 + 0.2}) {
    CHECK(parse_number(format_number(v)) == v);
  }
  CHECK(std::isinf(parse_number("inf")));
  CHECK_THROWS_AS(parse_number("1.0x"), ParseError);
  CHECK_THROWS_AS(parse_number(""), ParseError);
  CHECK(number_to_json(kInfinity) == "inf");
  CHECK(number_to_json(0.25) == 0.25);
  CHECK(std::isinf(number_from_json(Json("inf"))));
  CHECK(number_from_json(Json(1.5)) == 1.5);
}

TEST_CASE("csv escaping") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("report rows round trip through csv and json") {
  ReportRow inf_row;
  inf_row.id = "ce";
  inf_row.family = "cross_entropy";
  inf_row.k = 2;
  inf_row.tu = kInfinity;
  inf_row.eu = kInfinity;
  inf_row.estimator = Estimator::exact_pairwise;
  const std::vector<ReportRow> rows = {sample_row(), inf_row};

  const std::string csv = rows_to_csv(rows);
  CHECK(csv.rfind(std::string(kReportCsvHeader), 0) == 0);
  CHECK(rows_from_csv(csv) == rows);

  const Json j = rows_to_json(rows);
  CHECK(j[1]["tu"] == "inf");
  CHECK(j[1]["mc_stderr"].is_null());
  CHECK(j[1]["q_star"].is_null());
  CHECK(rows_from_json(Json::parse(j.dump())) == rows);

  CHECK_THROWS_AS(rows_from_csv("bad header\n"), ParseError);
  CHECK_THROWS_AS(rows_from_csv(std::string(kReportCsvHeader) + "\na,b\n"), ParseError);
  CHECK_THROWS_AS(rows_from_json(Json::object()), ParseError);
}

TEST_CASE("rows from reports") {
  UncertaintyReport r;
  r.k = 2;
  r.tu = 0.5;
  r.minimizer_q = Categorical({0.5, 0.5});
  const ReportRow row = to_row("x", r);
  CHECK(row.family == "distance");
  CHECK(row.q_star == std::vector<double>{0.5, 0.5});
  BaselineReport b;
  b.family = BaselineFamily::cross_entropy_alt;
  CHECK(to_row("y", b).family == std::string(to_string(BaselineFamily::cross_entropy_alt)));
}
