#include "souq/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace souq {

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::vector<double> number_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ParseError(path + "[" + std::to_string(i) + "]: expected a number");
    }
    out.push_back(j[i].get<double>());
  }
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace

SecondOrder distribution_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  if (!j.contains("type") || !j["type"].is_string()) {
    throw ParseError(path + ".type: missing or not a string");
  }
  const std::string type = j["type"].get<std::string>();
  try {
    if (type == "dirichlet") {
      if (!j.contains("alpha")) throw ParseError(path + ".alpha: missing");
      return Dirichlet(number_array(j["alpha"], path + ".alpha"));
    }
    if (type == "ensemble") {
      if (!j.contains("atoms") || !j["atoms"].is_array()) {
        throw ParseError(path + ".atoms: missing or not an array");
      }
      const Json& atoms_json = j["atoms"];
      if (atoms_json.empty()) throw ParseError(path + ".atoms: ensemble needs at least one atom");
      std::vector<Categorical> atoms;
      for (std::size_t m = 0; m < atoms_json.size(); ++m) {
        const std::string atom_path = path + ".atoms[" + std::to_string(m) + "]";
        try {
          atoms.emplace_back(number_array(atoms_json[m], atom_path));
        } catch (const std::invalid_argument& e) {
          throw ParseError(atom_path + ": " + e.what());
        }
      }
      std::vector<double> weights;
      if (j.contains("weights") && !j["weights"].is_null()) {
        weights = number_array(j["weights"], path + ".weights");
      }
      return Ensemble(std::move(atoms), std::move(weights));
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what());
  }
  throw ParseError(path + ".type: unknown distribution type '" + type + "'");
}

Json distribution_to_json(const SecondOrder& q) {
  if (const auto* dir = std::get_if<Dirichlet>(&q)) {
    return Json{{"type", "dirichlet"}, {"alpha", std::vector<double>(dir->alpha().begin(), dir->alpha().end())}};
  }
  const auto& ens = std::get<Ensemble>(q);
  Json atoms = Json::array();
  for (const auto& atom : ens.atoms()) atoms.push_back(atom.vec());
  return Json{{"type", "ensemble"},
              {"atoms", atoms},
              {"weights", std::vector<double>(ens.weights().begin(), ens.weights().end())}};
}

std::vector<NamedDistribution> parse_distributions(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("malformed JSON at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                     e.what());
  }
  Json entries;
  std::string prefix;
  if (doc.is_object() && doc.contains("distributions")) {
    entries = doc["distributions"];
    prefix = "$.distributions";
    if (!entries.is_array()) throw ParseError(prefix + ": expected an array");
  } else if (doc.is_array()) {
    entries = doc;
    prefix = "$";
  } else {
    entries = Json::array({doc});
    prefix = "";
  }
  if (entries.empty()) throw ParseError("no distributions in input");
  std::vector<NamedDistribution> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string path = prefix.empty() ? "$" : prefix + "[" + std::to_string(i) + "]";
    const Json& entry = entries[i];
    std::string id = "d" + std::to_string(i);
    if (entry.is_object() && entry.contains("id")) {
      if (!entry["id"].is_string()) throw ParseError(path + ".id: expected a string");
      id = entry["id"].get<std::string>();
    }
    out.push_back({std::move(id), distribution_from_json(entry, path)});
  }
  return out;
}

ReportRow to_row(const std::string& id, const UncertaintyReport& report) {
  ReportRow row;
  row.id = id;
  row.family = "distance";
  row.k = report.k;
  row.tu = report.tu;
  row.au = report.au;
  row.eu = report.eu;
  row.normalized = report.normalized;
  row.estimator = report.estimator;
  row.mc_stderr = report.mc_stderr;
  row.lambda_star = report.lambda_star;
  if (report.minimizer_q) row.q_star = report.minimizer_q->vec();
  return row;
}

ReportRow to_row(const std::string& id, const BaselineReport& report) {
  ReportRow row;
  row.id = id;
  row.family = std::string(to_string(report.family));
  row.k = report.k;
  row.tu = report.tu;
  row.au = report.au;
  row.eu = report.eu;
  row.estimator = report.estimator;
  row.mc_stderr = report.mc_stderr;
  return row;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  if (text == "inf") return kInfinity;
  if (text == "-inf") return -kInfinity;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << kReportCsvHeader << '\n';
  for (const auto& r : rows) {
    std::string q;
    if (r.q_star) {
      for (std::size_t i = 0; i < r.q_star->size(); ++i) {
        if (i > 0) q += ';';
        q += format_number((*r.q_star)[i]);
      }
    }
    out << csv_escape(r.id) << ',' << r.family << ',' << r.k << ',' << format_number(r.tu) << ','
        << format_number(r.au) << ',' << format_number(r.eu) << ','
        << (r.normalized ? "true" : "false") << ',' << to_string(r.estimator) << ','
        << optional_number(r.mc_stderr) << ',' << optional_number(r.lambda_star) << ',' << q << '\n';
  }
  return out.str();
}

std::vector<ReportRow> rows_from_csv(std::string_view text) {
  std::vector<ReportRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != kReportCsvHeader) throw ParseError("unexpected CSV header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) {
      throw ParseError("CSV line " + std::to_string(line_no) + ": expected 11 fields, got " +
                       std::to_string(f.size()));
    }
    ReportRow r;
    r.id = f[0];
    r.family = f[1];
    r.k = static_cast<std::size_t>(std::stoul(f[2]));
    r.tu = parse_number(f[3]);
    r.au = parse_number(f[4]);
    r.eu = parse_number(f[5]);
    r.normalized = f[6] == "true";
    r.estimator = estimator_from_string(f[7]);
    if (!f[8].empty()) r.mc_stderr = parse_number(f[8]);
    if (!f[9].empty()) r.lambda_star = parse_number(f[9]);
    if (!f[10].empty()) {
      std::vector<double> q;
      std::string_view rest = f[10];
      while (true) {
        const auto cut = rest.find(';');
        q.push_back(parse_number(rest.substr(0, cut)));
        if (cut == std::string_view::npos) break;
        rest.remove_prefix(cut + 1);
      }
      r.q_star = std::move(q);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number(j.get<std::string>());
  throw ParseError("expected a number");
}

Json rows_to_json(const std::vector<ReportRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json o{{"id", r.id},
           {"family", r.family},
           {"K", r.k},
           {"tu", number_to_json(r.tu)},
           {"au", number_to_json(r.au)},
           {"eu", number_to_json(r.eu)},
           {"normalized", r.normalized},
           {"estimator", std::string(to_string(r.estimator))}};
    o["mc_stderr"] = r.mc_stderr ? number_to_json(*r.mc_stderr) : Json(nullptr);
    o["lambda_star"] = r.lambda_star ? number_to_json(*r.lambda_star) : Json(nullptr);
    o["q_star"] = r.q_star ? Json(*r.q_star) : Json(nullptr);
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<ReportRow> rows_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("reports: expected an array");
  std::vector<ReportRow> rows;
  for (const auto& o : j) {
    ReportRow r;
    r.id = o.at("id").get<std::string>();
    r.family = o.at("family").get<std::string>();
    r.k = o.at("K").get<std::size_t>();
    r.tu = number_from_json(o.at("tu"));
    r.au = number_from_json(o.at("au"));
    r.eu = number_from_json(o.at("eu"));
    r.normalized = o.at("normalized").get<bool>();
    r.estimator = estimator_from_string(o.at("estimator").get<std::string>());
    if (!o.at("mc_stderr").is_null()) r.mc_stderr = number_from_json(o["mc_stderr"]);
    if (!o.at("lambda_star").is_null()) r.lambda_star = number_from_json(o["lambda_star"]);
    if (!o.at("q_star").is_null()) r.q_star = o["q_star"].get<std::vector<double>>();
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace souq
