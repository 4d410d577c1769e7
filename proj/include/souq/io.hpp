#pragma once

// JSON distribution specs and report serialization shared by the CLI,
// the axiom witnesses and the Python bindings.
//
//   {"type": "dirichlet", "alpha": [...]}
//   {"type": "ensemble", "atoms": [[...], ...], "weights": [...]}   weights optional
//   {"distributions": [ ... ]}                                        batch wrapper

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "souq/baseline.hpp"
#include "souq/distance.hpp"
#include "souq/second_order.hpp"

namespace souq {

using Json = nlohmann::json;

/// Malformed input; the message carries a line/column or a field path.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedDistribution {
  std::string id;
  SecondOrder distribution;
};

/// Validates one distribution object; `path` prefixes error messages.
SecondOrder distribution_from_json(const Json& j, const std::string& path = "$");
Json distribution_to_json(const SecondOrder& q);

/// Accepts a single distribution object, an array of them, or the
/// {"distributions": [...]} wrapper. Entries may carry an "id"; missing ids
/// become d0, d1, ...
std::vector<NamedDistribution> parse_distributions(std::string_view text);

/// One output line of the measure/compare commands.
struct ReportRow {
  std::string id;
  std::string family;
  std::size_t k = 0;
  double tu = 0.0;
  double au = 0.0;
  double eu = 0.0;
  bool normalized = false;
  Estimator estimator = Estimator::closed_form;
  std::optional<double> mc_stderr;
  std::optional<double> lambda_star;
  std::optional<std::vector<double>> q_star;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

ReportRow to_row(const std::string& id, const UncertaintyReport& report);
ReportRow to_row(const std::string& id, const BaselineReport& report);

/// Shortest round-trip decimal form; "inf" for the divergence sentinel.
std::string format_number(double v);
double parse_number(std::string_view text);

inline constexpr std::string_view kReportCsvHeader =
    "id,family,K,tu,au,eu,normalized,estimator,mc_stderr,lambda_star,q_star";

std::string rows_to_csv(const std::vector<ReportRow>& rows);
std::vector<ReportRow> rows_from_csv(std::string_view text);

Json rows_to_json(const std::vector<ReportRow>& rows);
std::vector<ReportRow> rows_from_json(const Json& j);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

/// Numbers as JSON, with non-finite values written as strings.
Json number_to_json(double v);
double number_from_json(const Json& j);

}  // namespace souq
