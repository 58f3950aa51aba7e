#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmc/certify.hpp"
#include "qmc/errors.hpp"
#include "qmc/oracle.hpp"
#include "qmc/pipeline.hpp"

namespace py = pybind11;
using namespace qmc;

namespace {

Graph to_graph(int n, const std::vector<std::tuple<int, int, double>>& edges) {
  std::vector<Edge> out;
  for (const auto& [i, j, w] : edges) out.push_back({i, j, w});
  return Graph(n, std::move(out));
}

std::vector<std::tuple<int, int, double>> edge_tuples(const Graph& g) {
  std::vector<std::tuple<int, int, double>> out;
  for (const auto& e : g.edges()) out.emplace_back(e.i, e.j, e.w);
  return out;
}

RunConfig run_config(std::size_t rounds, std::optional<std::uint64_t> seed, double alpha0, bool deterministic,
                     const std::string& energy, double tol_feas, int max_iterations, bool certify) {
  RunConfig cfg;
  cfg.rounds = rounds;
  cfg.seed = seed;
  cfg.alpha0 = alpha0;
  cfg.deterministic = deterministic;
  cfg.certify = certify;
  cfg.solver.tol_feas = tol_feas;
  cfg.solver.max_iterations = max_iterations;
  if (energy == "auto") {
    cfg.energy = EnergyEvaluation::Auto;
  } else if (energy == "statevector") {
    cfg.energy = EnergyEvaluation::Statevector;
  } else if (energy == "bound") {
    cfg.energy = EnergyEvaluation::ClosedForm;
  } else {
    throw InputError("energy must be auto, statevector or bound");
  }
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum Max Cut SDP rounding core";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);

  m.attr("DEFAULT_ALPHA0") = kDefaultAlpha0;

  m.def("generate", [](const std::string& spec) {
    Graph g = generate(parse_generator_spec(spec));
    return py::make_tuple(g.num_vertices(), edge_tuples(g));
  }, py::arg("spec"), "Generator spec such as 'cycle:n=5' to (n, [(i, j, w), ...]).");

  m.def("parse_edge_list", [](const std::string& text) {
    Graph g = parse_graph(text, GraphFormat::EdgeList);
    return py::make_tuple(g.num_vertices(), edge_tuples(g));
  }, py::arg("text"));

  m.def("exact_opt", [](int n, const std::vector<std::tuple<int, int, double>>& edges) {
    return exact_opt(to_graph(n, edges)).lambda_max;
  }, py::arg("n"), py::arg("edges"));

  m.def("solve_sdp", [](int n, const std::vector<std::tuple<int, int, double>>& edges, double tol_feas,
                        int max_iterations) {
    SolverConfig cfg;
    cfg.tol_feas = tol_feas;
    cfg.max_iterations = max_iterations;
    GramSolution sol = solve(build_model(to_graph(n, edges)), cfg);
    py::dict out;
    out["objective"] = sol.objective;
    out["dual_bound"] = sol.dual_bound;
    out["residuals"] = sol.residuals.to_json().dump();
    return out;
  }, py::arg("n"), py::arg("edges"), py::arg("tol_feas") = 1e-6, py::arg("max_iterations") = 20000);

  m.def("run_pipeline_json", [](int n, const std::vector<std::tuple<int, int, double>>& edges,
                                const std::string& name, std::size_t rounds, std::optional<std::uint64_t> seed,
                                double alpha0, bool deterministic, const std::string& energy, double tol_feas,
                                int max_iterations, bool certify) {
    RunConfig cfg = run_config(rounds, seed, alpha0, deterministic, energy, tol_feas, max_iterations, certify);
    RunReport r = run_pipeline(to_graph(n, edges), cfg, name);
    return r.to_json(!deterministic).dump();
  }, py::arg("n"), py::arg("edges"), py::arg("name") = "", py::arg("rounds") = 1000, py::arg("seed") = py::none(),
     py::arg("alpha0") = kDefaultAlpha0, py::arg("deterministic") = false, py::arg("energy") = "auto",
     py::arg("tol_feas") = 1e-6, py::arg("max_iterations") = 20000, py::arg("certify") = false);

  m.def("certify_json", [](double alpha0, bool sweep) { return certify_constants(alpha0, sweep).to_json().dump(); },
        py::arg("alpha0") = kDefaultAlpha0, py::arg("sweep") = false);

  m.def("alpha_gw", [] { return alpha_gw().value; });
  m.def("ratio_constant", [](double alpha0) { return ratio_constant(alpha0).value; },
        py::arg("alpha0") = kDefaultAlpha0);
}
