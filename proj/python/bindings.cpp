#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tucore/approx.hpp"
#include "tucore/bench.hpp"
#include "tucore/errors.hpp"
#include "tucore/game.hpp"
#include "tucore/metrics.hpp"
#include "tucore/oracle.hpp"
#include "tucore/polytope.hpp"

namespace py = pybind11;
using namespace tucore;

namespace {

std::vector<Eigen::VectorXd> points_of(const VertexSet& s) { return s.points; }

VertexSet make_set(const std::vector<Eigen::VectorXd>& pts) {
  VertexSet s;
  s.points = pts;
  return s;
}

py::dict metrics_dict(const MetricsReport& m) {
  py::dict d;
  d["epr_num"] = m.epr_num;
  d["epr_den"] = m.epr_den;
  d["epr"] = m.epr;
  d["vr"] = m.vr;
  d["vr_note"] = m.vr_note;
  d["adc"] = m.adc;
  d["wdc"] = m.wdc;
  d["rdc"] = m.rdc;
  d["hull_time_s"] = m.hull_time_s;
  return d;
}

}  // namespace

PYBIND11_MODULE(_tucore, m) {
  m.doc() = "Core approximation for TU cooperative games";

  py::register_exception<Error>(m, "TucoreError", PyExc_RuntimeError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

  py::class_<TUGame>(m, "TUGame")
      .def(py::init<int, std::vector<double>, std::string>(), py::arg("n"), py::arg("values"), py::arg("label") = "")
      .def_property_readonly("n", &TUGame::players)
      .def_property_readonly("values", &TUGame::values)
      .def_property_readonly("label", &TUGame::label)
      .def_property_readonly("grand_value", &TUGame::grand_value)
      .def("value", &TUGame::value, py::arg("mask"))
      .def("to_json", [](const TUGame& g) { return game_to_json(g); })
      .def_static("from_json", &game_from_json)
      .def("__repr__", [](const TUGame& g) { return "<TUGame " + g.label() + ">"; });

  m.def("model_game", &build_model_game, py::arg("model"), py::arg("n"),
        "savings | nonconvex | museum | file:<path>");
  m.def("nonconvex_game", &make_nonconvex_game, py::arg("n"), py::arg("beta") = 0.75);
  m.def("shapley_value", &shapley_value, py::arg("game"));
  m.def("check_nonempty", &check_nonempty, py::arg("game"));
  m.def("is_supermodular", &is_supermodular, py::arg("game"), py::arg("tol") = 1e-9);

  m.def(
      "approximate_core",
      [](const TUGame& g, int k, const std::string& scheme, std::uint64_t seed, double perturbation, int workers) {
        const auto r = approximate_core(g, k, {parse_scheme(scheme), seed, perturbation}, workers);
        py::dict d;
        d["vertices"] = points_of(r.vertices);
        d["core_empty"] = r.core_empty;
        d["solve_time_s"] = r.solve_time_s;
        d["draws"] = r.lp_stats.draws;
        d["pivots"] = r.lp_stats.pivots;
        return d;
      },
      py::arg("game"), py::arg("k"), py::arg("scheme") = "rand", py::arg("seed") = 0, py::arg("perturbation") = 1e-6,
      py::arg("workers") = 1);

  m.def(
      "enumerate_vertices", [](const TUGame& g) { return points_of(enumerate_vertices_naive(g)); }, py::arg("game"),
      "All core vertices by naive enumeration (n <= 6).");
  m.def(
      "marginal_vectors", [](const TUGame& g) { return points_of(enumerate_marginal_vectors(g)); }, py::arg("game"));
  m.def(
      "saturation_reference",
      [](const TUGame& g, int stall, std::uint64_t seed) { return points_of(saturation_reference(g, {stall, seed})); },
      py::arg("game"), py::arg("stall_budget") = 5000, py::arg("seed") = 0);

  m.def("in_core", &exact_core_membership, py::arg("game"), py::arg("x"));
  m.def("verify_vertex", &verify_vertex, py::arg("game"), py::arg("x"));
  m.def(
      "in_hull", [](const std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& x) { return contains(pts, x); },
      py::arg("points"), py::arg("x"));

  m.def(
      "volume",
      [](const std::vector<Eigen::VectorXd>& pts, double grand_value) -> std::optional<double> {
        const auto v = volume(convex_hull(project(make_set(pts), grand_value)));
        if (v.degenerate) return std::nullopt;
        return v.value;
      },
      py::arg("points"), py::arg("grand_value"), "Chart volume of the hull (None when degenerate).");

  m.def(
      "metrics",
      [](const std::vector<Eigen::VectorXd>& approx, const std::vector<Eigen::VectorXd>& exact, double grand_value) {
        return metrics_dict(compute_metrics(make_set(approx), make_set(exact), grand_value));
      },
      py::arg("approx"), py::arg("exact"), py::arg("grand_value"));

  m.def(
      "rdc",
      [](const std::vector<Eigen::VectorXd>& exact, const Eigen::VectorXd& approx_centroid) {
        const auto r = rdc(make_set(exact), approx_centroid);
        return py::make_tuple(r.adc, r.wdc, r.rdc);
      },
      py::arg("exact"), py::arg("approx_centroid"));

  m.def(
      "bench",
      [](const std::string& config_json, bool include_timing) {
        std::ostringstream os;
        emit_table(run_experiment(parse_config(config_json)).rows, TableStyle::kCsv, os, include_timing);
        return os.str();
      },
      py::arg("config_json"), py::arg("include_timing") = true, "Run an experiment config; returns CSV text.");
}
