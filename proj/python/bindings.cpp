#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "souq/app.hpp"
#include "souq/axioms.hpp"
#include "souq/baseline.hpp"
#include "souq/distance.hpp"
#include "souq/io.hpp"

namespace py = pybind11;

namespace {

souq::EuSolverConfig solver(std::size_t samples, double lambda_tol) {
  souq::EuSolverConfig cfg;
  cfg.mc_samples = samples;
  cfg.lambda_tol = lambda_tol;
  cfg.validate();
  return cfg;
}

souq::SecondOrder second_order(const py::object& q) {
  if (py::isinstance<souq::Dirichlet>(q)) return q.cast<souq::Dirichlet>();
  if (py::isinstance<souq::Ensemble>(q)) return q.cast<souq::Ensemble>();
  throw py::type_error("expected a Dirichlet or an Ensemble");
}

py::object to_python(const souq::SecondOrder& q) {
  return std::visit([](const auto& v) { return py::cast(v); }, q);
}

py::dict report_dict(const souq::UncertaintyReport& r) {
  py::dict d;
  d["k"] = r.k;
  d["tu"] = r.tu;
  d["au"] = r.au;
  d["eu"] = r.eu;
  d["normalized"] = r.normalized;
  d["estimator"] = std::string(souq::to_string(r.estimator));
  d["mc_stderr"] = r.mc_stderr;
  d["minimizer"] = r.minimizer_q ? py::cast(r.minimizer_q->vec()) : py::none();
  d["lambda_star"] = r.lambda_star;
  return d;
}

py::dict baseline_dict(const souq::BaselineReport& r) {
  py::dict d;
  d["family"] = std::string(souq::to_string(r.family));
  d["k"] = r.k;
  d["tu"] = r.tu;
  d["au"] = r.au;
  d["eu"] = r.eu;
  d["estimator"] = std::string(souq::to_string(r.estimator));
  d["mc_stderr"] = r.mc_stderr;
  return d;
}

}  // namespace

PYBIND11_MODULE(_souq, m) {
  m.doc() = "Wasserstein-based uncertainty measures for second-order distributions";

  py::register_exception<souq::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<souq::ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<souq::Dirichlet>(m, "Dirichlet")
      .def(py::init<std::vector<double>>(), py::arg("alpha"))
      .def_property_readonly("alpha", [](const souq::Dirichlet& d) {
        return std::vector<double>(d.alpha().begin(), d.alpha().end());
      })
      .def_property_readonly("alpha0", &souq::Dirichlet::alpha0)
      .def("__len__", &souq::Dirichlet::size)
      .def("__repr__", [](const souq::Dirichlet& d) {
        return "Dirichlet(" + souq::distribution_to_json(d).at("alpha").dump() + ")";
      });

  py::class_<souq::Ensemble>(m, "Ensemble")
      .def(py::init([](const std::vector<std::vector<double>>& atoms, std::vector<double> weights) {
             std::vector<souq::Categorical> cats(atoms.begin(), atoms.end());
             return souq::Ensemble(std::move(cats), std::move(weights));
           }),
           py::arg("atoms"), py::arg("weights") = std::vector<double>{})
      .def_property_readonly("atoms", [](const souq::Ensemble& e) {
        std::vector<std::vector<double>> out;
        for (const auto& a : e.atoms()) out.push_back(a.vec());
        return out;
      })
      .def_property_readonly("weights", [](const souq::Ensemble& e) {
        return std::vector<double>(e.weights().begin(), e.weights().end());
      })
      .def("__len__", &souq::Ensemble::size)
      .def("__repr__", [](const souq::Ensemble& e) {
        return "Ensemble(" + souq::distribution_to_json(e).dump() + ")";
      });

  m.def("parse_distributions", [](const std::string& text) {
    py::list out;
    for (const auto& d : souq::parse_distributions(text)) {
      out.append(py::make_tuple(d.id, to_python(d.distribution)));
    }
    return out;
  }, py::arg("text"), "Parse a JSON distribution, array or {\"distributions\": [...]} batch.");

  m.def("tu", [](const py::object& obj) { return souq::tu(second_order(obj)); }, py::arg("q"));
  m.def("au", [](const py::object& obj, std::size_t samples, std::uint64_t seed) {
    const auto e = souq::au(second_order(obj), solver(samples, 1e-10), seed);
    return py::make_tuple(e.value, e.std_error);
  }, py::arg("q"), py::arg("samples") = 100000, py::arg("seed") = 0,
     "Aleatoric uncertainty as (value, stderr); stderr is 0 for ensembles.");
  m.def("eu", [](const py::object& obj, double lambda_tol) {
    const auto r = souq::eu(second_order(obj), solver(100000, lambda_tol));
    py::dict d;
    d["value"] = r.value;
    d["minimizer"] = r.minimizer.vec();
    d["lambda_star"] = r.lambda_star;
    d["estimator"] = std::string(souq::to_string(r.estimator));
    d["iterations"] = r.iterations;
    d["notes"] = r.notes;
    return d;
  }, py::arg("q"), py::arg("lambda_tol") = 1e-10);
  m.def("measure", [](const py::object& obj, std::size_t samples, std::uint64_t seed, bool normalize) {
    auto r = souq::measure(second_order(obj), solver(samples, 1e-10), seed);
    if (normalize) r = souq::normalize(r, r.k);
    return report_dict(r);
  }, py::arg("q"), py::arg("samples") = 100000, py::arg("seed") = 0, py::arg("normalize") = false);
  m.def("entropy_measures", [](const py::object& obj, std::size_t samples, std::uint64_t seed) {
    return baseline_dict(souq::entropy_report(second_order(obj), solver(samples, 1e-10), seed));
  }, py::arg("q"), py::arg("samples") = 100000, py::arg("seed") = 0);
  m.def("cross_entropy_measures", [](const py::object& obj, std::size_t samples, std::uint64_t seed) {
    return baseline_dict(souq::cross_entropy_report(second_order(obj), solver(samples, 1e-10), seed));
  }, py::arg("q"), py::arg("samples") = 100000, py::arg("seed") = 0);

  m.def("run_axiom_suite", [](const std::string& family, std::size_t trials, std::uint64_t seed,
                              std::size_t samples) {
    const auto triple = souq::triple_by_name(family, solver(samples, 1e-10));
    std::vector<std::string> out;
    for (const auto& r : souq::run_suite(triple, trials, seed)) out.push_back(r.to_json().dump());
    return out;
  }, py::arg("family"), py::arg("trials"), py::arg("seed"), py::arg("samples") = 20000,
     "Run A0-A8; one JSON string per axiom result.");

  m.def("log_gamma", &souq::log_gamma, py::arg("x"));
  m.def("digamma", &souq::digamma, py::arg("x"));
  m.def("beta_cdf", [](double a, double b, double x) { return souq::beta_cdf(souq::BetaShape(a, b), x); },
        py::arg("a"), py::arg("b"), py::arg("x"));
  m.def("beta_quantile", [](double a, double b, double u) {
    return souq::beta_quantile(souq::BetaShape(a, b), u);
  }, py::arg("a"), py::arg("b"), py::arg("u"));
}
