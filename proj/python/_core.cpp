#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "quermass/cli.hpp"
#include "quermass/config.hpp"
#include "quermass/flow.hpp"
#include "quermass/geometry.hpp"
#include "quermass/symfunc.hpp"
#include "quermass/verify.hpp"

namespace py = pybind11;
using namespace quermass;

namespace {

ShapeSpec shape_from(const std::string& doc) {
  return shape_from_json(nlohmann::json::parse(doc), "shape");
}

RadialGraph graph_from(int dim, std::vector<double> radii) {
  return RadialGraph(dim, std::move(radii));
}

py::dict geometry_dict(const PointwiseGeometry& g) {
  const std::size_t m = g.size();
  py::array_t<double> kappa({m, static_cast<std::size_t>(g.dim)});
  py::array_t<double> sigma({m, static_cast<std::size_t>(g.dim + 1)});
  auto kv = kappa.mutable_unchecked<2>();
  auto sv = sigma.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m; ++i) {
    for (int j = 0; j < g.dim; ++j) kv(i, j) = g.kappa[i][j];
    for (int j = 0; j <= g.dim; ++j) sv(i, j) = g.sigma[i][j];
  }
  py::dict d;
  d["coordinate"] = py::array(py::cast(g.coord));
  d["r"] = py::array(py::cast(g.r));
  d["kappa"] = kappa;
  d["sigma"] = sigma;
  d["u"] = py::array(py::cast(g.u));
  d["dmu"] = py::array(py::cast(g.dmu));
  return d;
}

py::dict report_dict(const IdentityReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["lhs"] = r.lhs;
  d["rhs"] = r.rhs;
  d["abs_residual"] = r.abs_residual;
  d["rel_residual"] = r.rel_residual;
  d["tolerance"] = r.tolerance;
  d["pass"] = r.pass;
  d["note"] = r.note;
  return d;
}

py::dict run_dict(const std::string& doc) {
  const RunConfig cfg = parse_config(nlohmann::json::parse(doc));
  const auto initial = make_shape(cfg.shape, cfg.flow.n, cfg.flow.grid);
  RunResult res = [&] {
    py::gil_scoped_release release;
    return run(cfg.flow, initial);
  }();
  const auto& rec = res.record;
  py::array_t<double> rows({rec.rows.size(), rec.columns.size()});
  auto rv = rows.mutable_unchecked<2>();
  for (std::size_t i = 0; i < rec.rows.size(); ++i) {
    for (std::size_t j = 0; j < rec.columns.size(); ++j) rv(i, j) = rec.rows[i][j];
  }
  const auto final_graph = rescale_state(res.final_state);
  py::dict d;
  d["status"] = to_string(res.status);
  d["message"] = res.message;
  d["columns"] = rec.columns;
  d["rows"] = rows;
  d["t"] = res.final_state.t;
  d["log_scale"] = res.final_state.log_scale;
  d["radii"] = py::array(py::cast(std::vector<double>(res.final_state.graph.radii().begin(),
                                                      res.final_state.graph.radii().end())));
  d["rescaled_radii"] = py::array(py::cast(std::vector<double>(final_graph.radii().begin(),
                                                               final_graph.radii().end())));
  return d;
}

std::vector<py::dict> verify_suite(const std::string& suite) {
  std::vector<IdentityReport> all;
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = cli::suite_names();
  } else {
    suites = {suite};
  }
  for (const auto& s : suites) {
    for (const auto& task : cli::suite_tasks(s, std::nullopt)) {
      std::vector<IdentityReport> reps;
      {
        py::gil_scoped_release release;
        reps = task.run();
      }
      all.insert(all.end(), reps.begin(), reps.end());
    }
  }
  std::vector<py::dict> out;
  for (const auto& r : all) out.push_back(report_dict(r));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Inverse curvature flows of starshaped curves and axisymmetric surfaces";

  // Later registrations are tried first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("elem_sym", [](std::vector<double> l, int k) { return elem_sym(l, k); },
        py::arg("lam"), py::arg("k"));
  m.def("elem_sym_all", [](std::vector<double> l, int k) { return elem_sym_all(l, k); },
        py::arg("lam"), py::arg("max_m"));
  m.def("newton_gap", [](std::vector<double> l, int k) { return newton_maclaurin_check(l, k); },
        py::arg("lam"), py::arg("k"));
  m.def("in_gamma_k", [](std::vector<double> l, int k, bool strict) { return in_gamma_k(l, k, strict); },
        py::arg("lam"), py::arg("k"), py::arg("strict") = true);
  m.def("cnk", &cnk, py::arg("n"), py::arg("k"));

  m.def("make_shape",
        [](const std::string& doc, int n, std::size_t intervals) {
          const auto g = make_shape(shape_from(doc), n, intervals);
          return std::vector<double>(g.radii().begin(), g.radii().end());
        },
        py::arg("shape_json"), py::arg("n"), py::arg("intervals"));
  m.def("geometry",
        [](std::vector<double> radii, int n) {
          return geometry_dict(compute_geometry(graph_from(n, std::move(radii))));
        },
        py::arg("radii"), py::arg("n"));
  m.def("quermass",
        [](std::vector<double> radii, int n) {
          const auto geo = compute_geometry(graph_from(n, std::move(radii)));
          std::vector<double> v;
          for (int j = 0; j <= n; ++j) v.push_back(quermass::quermass(geo, j));
          return v;
        },
        py::arg("radii"), py::arg("n"),
        "V_{n+1}, V_n, ..., V_1 of the radial graph");
  m.def("iso_ratio",
        [](std::vector<double> radii, int n, int k) {
          return iso_ratio(compute_geometry(graph_from(n, std::move(radii))), k, n);
        },
        py::arg("radii"), py::arg("n"), py::arg("k"));
  m.def("iso_ratio_ball", &iso_ratio_ball, py::arg("n"), py::arg("k"));
  m.def("roundness",
        [](std::vector<double> radii, int n) { return roundness(graph_from(n, std::move(radii))); },
        py::arg("radii"), py::arg("n"));

  m.def("run_json", &run_dict, py::arg("config_json"));
  m.def("normalize_config_json",
        [](const std::string& doc) { return to_json(parse_config(nlohmann::json::parse(doc))).dump(); },
        py::arg("config_json"));
  m.def("verify", &verify_suite, py::arg("suite"));
  m.def("suites", [] { return cli::suite_names(); });
}
