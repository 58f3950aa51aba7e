// qmc: Quantum Max Cut by SDP rounding into a commuting circuit.
//
// Exit codes: 0 success, 2 solver failure, 3 audit failure, 4 input error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmc/certify.hpp"
#include "qmc/energy.hpp"
#include "qmc/errors.hpp"
#include "qmc/graph.hpp"
#include "qmc/oracle.hpp"
#include "qmc/pipeline.hpp"
#include "qmc/rounding.hpp"
#include "qmc/sdp.hpp"

namespace {

constexpr int kExitSolver = 2;
constexpr int kExitAudit = 3;
constexpr int kExitInput = 4;

struct CommonOptions {
  std::string input;
  std::string generate;
  std::size_t rounds = 1000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double alpha0 = qmc::kDefaultAlpha0;
  double tol_feas = 1e-6;
  double tol_psd = 1e-8;
  int max_iterations = 0;
  int anderson_memory = -1;
  int sim_limit = qmc::kDefaultSimLimit;
  int opt_limit = 12;
  std::string out;
  std::string format;  // json, except csv for bench
  std::string energy_mode = "auto";
  bool deterministic = false;
};

qmc::Graph load_graph(const CommonOptions& o) {
  if (!o.input.empty() && !o.generate.empty()) throw qmc::InputError("give either --input or --generate, not both");
  if (!o.input.empty()) return qmc::read_graph_file(o.input);
  if (!o.generate.empty()) return qmc::generate(qmc::parse_generator_spec(o.generate));
  throw qmc::InputError("need --input FILE or --generate KIND:PARAMS");
}

std::string instance_name(const CommonOptions& o) { return o.input.empty() ? o.generate : o.input; }

qmc::SolverConfig solver_config(const CommonOptions& o) {
  qmc::SolverConfig cfg;
  cfg.tol_feas = o.tol_feas;
  cfg.tol_psd = o.tol_psd;
  if (o.max_iterations > 0) cfg.max_iterations = o.max_iterations;
  if (o.anderson_memory >= 0) cfg.anderson_memory = o.anderson_memory;
  cfg.seed = o.seed;
  return cfg;
}

qmc::RunConfig run_config(const CommonOptions& o) {
  qmc::RunConfig cfg;
  cfg.rounds = o.rounds;
  if (o.seed_given) cfg.seed = o.seed;
  cfg.alpha0 = o.alpha0;
  cfg.solver = solver_config(o);
  cfg.sim_limit = o.sim_limit;
  cfg.opt_limit = o.opt_limit;
  cfg.deterministic = o.deterministic;
  if (o.energy_mode == "statevector") {
    cfg.energy = qmc::EnergyEvaluation::Statevector;
  } else if (o.energy_mode == "bound") {
    cfg.energy = qmc::EnergyEvaluation::ClosedForm;
  }
  return cfg;
}

void emit(const CommonOptions& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw qmc::InputError("cannot write " + o.out);
  f << text;
  if (!text.empty() && text.back() != '\n') f << "\n";
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2); }

qmc::VectorSolution solve_vectors(const qmc::Graph& g, const CommonOptions& o, qmc::GramSolution* sol_out = nullptr) {
  const qmc::SolverConfig cfg = solver_config(o);
  qmc::GramSolution sol = qmc::solve(qmc::build_model(g), cfg);
  if (sol_out) *sol_out = sol;
  return qmc::extract_vectors(sol, cfg);
}

int cmd_solve(const CommonOptions& o, const std::string& dump_model) {
  const qmc::Graph g = load_graph(o);
  const qmc::SdpModel model = qmc::build_model(g);
  if (!dump_model.empty()) {
    std::ofstream f(dump_model);
    if (!f) throw qmc::InputError("cannot write " + dump_model);
    f << model.to_json().dump() << "\n";
  }
  qmc::GramSolution sol;
  const qmc::VectorSolution vs = solve_vectors(g, o, &sol);
  const auto gammas = qmc::compute_gammas(vs, g);
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edge(k);
    edges.push_back({{"i", e.i}, {"j", e.j}, {"w", e.w}, {"pair_overlap", vs.pair_overlap(e.i, e.j)}, {"gamma", gammas[k]}});
  }
  nlohmann::json doc = {{"instance", instance_name(o)},
                        {"n", g.num_vertices()},
                        {"gram_size", model.index.size()},
                        {"num_constraints", model.constraints.size()},
                        {"objective", sol.objective},
                        {"dual_bound", sol.dual_bound},
                        {"residuals", sol.residuals.to_json()},
                        {"extraction_error", vs.reconstruction_error},
                        {"pair_identity_worst", qmc::check_pair_identities(vs).worst()},
                        {"edges", edges}};
  emit(o, dump(doc));
  return 0;
}

int cmd_round(const CommonOptions& o) {
  const qmc::Graph g = load_graph(o);
  const qmc::VectorSolution vs = solve_vectors(g, o);
  const qmc::EdgeParameters params = qmc::edge_parameters(vs, g, o.alpha0);
  const qmc::Assignment assign = qmc::sample_assignment(vs, o.seed);
  emit(o, dump(qmc::rounding_outcome_json(assign, params, g)));
  return 0;
}

int cmd_energy(const CommonOptions& o) {
  const qmc::Graph g = load_graph(o);
  const qmc::VectorSolution vs = solve_vectors(g, o);
  const qmc::EdgeParameters params = qmc::edge_parameters(vs, g, o.alpha0);
  const qmc::Assignment assign = qmc::sample_assignment(vs, o.seed);
  nlohmann::json doc = qmc::total_energy(params, assign, g, qmc::EnergyMode::ExactWhereCut).to_json();
  doc["rounding"] = qmc::rounding_outcome_json(assign, params, g);
  if (g.num_vertices() <= o.sim_limit) {
    doc["statevector_energy"] = qmc::expectation(qmc::simulate(qmc::build_circuit(assign, params, g), o.sim_limit), g);
  }
  emit(o, dump(doc));
  return 0;
}

int cmd_exact(const CommonOptions& o) {
  const qmc::Graph g = load_graph(o);
  const qmc::SpectrumResult r = qmc::exact_opt(g, o.sim_limit);
  emit(o, dump({{"instance", instance_name(o)},
                {"n", g.num_vertices()},
                {"lambda_max", r.lambda_max},
                {"sector", r.sector},
                {"sector_dimension", r.sector_dimension}}));
  return 0;
}

int cmd_certify(const CommonOptions& o, bool sweep, std::size_t cut_samples, std::size_t ratio_samples) {
  qmc::Certificate cert = qmc::certify_constants(o.alpha0, sweep);
  if (!o.input.empty() || !o.generate.empty()) {
    const qmc::Graph g = load_graph(o);
    const qmc::VectorSolution vs = solve_vectors(g, o);
    qmc::InstanceAuditOptions opts;
    opts.cut_samples = cut_samples;
    opts.ratio_samples = ratio_samples;
    opts.seed = o.seed;
    opts.sim_limit = o.sim_limit;
    qmc::audit_instance(cert, vs, g, opts);
  }
  emit(o, dump(cert.to_json()));
  std::cerr << "alpha_gw = " << cert.alpha_gw << ", ratio constant = " << cert.ratio_constant
            << " (alpha0 = " << cert.alpha0_used << ")";
  if (cert.sweep) std::cerr << ", best alpha0 = " << cert.sweep->best_alpha0;
  std::cerr << "\n";
  for (const auto& a : cert.audits) {
    if (!a.passed) std::cerr << "audit failed: " << a.name << " (residual " << a.residual << ")\n";
  }
  return cert.passed() ? 0 : kExitAudit;
}

int cmd_pipeline(const CommonOptions& o, bool certify) {
  const qmc::Graph g = load_graph(o);
  qmc::RunConfig cfg = run_config(o);
  cfg.certify = certify;
  if (o.format == "csv") {
    emit(o, qmc::bench_csv({{instance_name(o), g}}, cfg));
    return 0;
  }
  const qmc::RunReport rep = qmc::run_pipeline(g, cfg, instance_name(o));
  emit(o, dump(rep.to_json(!o.deterministic)));
  if (rep.certificate && !rep.certificate->passed()) return kExitAudit;
  return 0;
}

int cmd_bench(const CommonOptions& o, const std::vector<std::string>& specs, const std::string& suite_file) {
  std::vector<std::string> all = specs;
  if (!suite_file.empty()) {
    std::ifstream f(suite_file);
    if (!f) throw qmc::InputError("cannot open suite file " + suite_file);
    std::string line;
    while (std::getline(f, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
      if (!line.empty()) all.push_back(line);
    }
  }
  std::vector<qmc::BenchInstance> suite;
  for (const auto& s : all) suite.push_back({s, qmc::generate(qmc::parse_generator_spec(s))});
  qmc::RunConfig cfg = run_config(o);
  if (o.format != "json") {
    emit(o, qmc::bench_csv(suite, cfg));
    return 0;
  }
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& inst : suite) {
    try {
      reports.push_back(qmc::run_pipeline(inst.graph, cfg, inst.name).to_json(!o.deterministic));
    } catch (const qmc::SolverFailure& e) {
      reports.push_back({{"instance", inst.name}, {"error", "sdp_failure"}, {"residuals", e.residuals.to_json()}});
    } catch (const std::exception& e) {
      reports.push_back({{"instance", inst.name}, {"error", e.what()}});
    }
  }
  emit(o, dump(reports));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Max Cut approximation by SDP rounding into a commuting circuit"};
  app.require_subcommand(1);
  CommonOptions o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "Graph file (.json or edge list)");
    sub->add_option("--generate", o.generate, "Generator spec, e.g. erdos_renyi:n=8,p=0.4,seed=3");
    sub->add_option("--rounds", o.rounds, "Rounding samples")->check(CLI::PositiveNumber);
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t s) { o.seed = s; o.seed_given = true; }, "Master seed");
    sub->add_option("--alpha0", o.alpha0, "Parameter map coefficient")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol-feas", o.tol_feas, "Constraint residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-psd", o.tol_psd, "Negative eigenvalue tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-iterations", o.max_iterations, "Solver iteration budget");
    sub->add_option("--anderson-memory", o.anderson_memory, "Solver acceleration memory (0 disables)");
    sub->add_option("--sim-limit", o.sim_limit, "Largest n simulated or diagonalized");
    sub->add_option("--opt-limit", o.opt_limit, "Largest n for exact lambda_max in reports");
    sub->add_option("--out", o.out, "Output path (default stdout)");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--energy-mode", o.energy_mode, "Per-sample energy evaluation")
        ->check(CLI::IsMember({"auto", "statevector", "bound"}));
    sub->add_flag("--deterministic", o.deterministic, "Reproducible output (requires --seed)");
  };

  auto* solve = app.add_subcommand("solve", "Solve the SDP relaxation and report residuals");
  std::string dump_model;
  add_common(solve);
  solve->add_option("--dump-model", dump_model, "Write the SDP model (JSON) to this path");

  auto* round = app.add_subcommand("round", "Solve and draw one rounding outcome");
  add_common(round);
  auto* energy = app.add_subcommand("energy", "Solve, round once, and evaluate per-edge energies");
  add_common(energy);
  auto* exact = app.add_subcommand("exact", "Exact lambda_max by sector diagonalization");
  add_common(exact);

  auto* certify = app.add_subcommand("certify", "Reproduce the approximation constants and audit an instance");
  add_common(certify);
  bool sweep = false;
  std::size_t cut_samples = 100000, ratio_samples = 10000;
  certify->add_flag("--sweep", sweep, "Sweep alpha0 over [0, 0.2]");
  certify->add_option("--cut-samples", cut_samples, "Samples for the cut probability audit");
  certify->add_option("--ratio-samples", ratio_samples, "Samples for the per-edge ratio audit");

  auto* bench = app.add_subcommand("bench", "Run the pipeline over a suite and print CSV");
  add_common(bench);
  std::vector<std::string> bench_specs;
  std::string suite_file;
  bench->add_option("--instance", bench_specs, "Generator spec (repeatable)");
  bench->add_option("--suite", suite_file, "File with one generator spec per line");

  auto* pipeline = app.add_subcommand("pipeline", "Full run: solve, round, evaluate, report");
  add_common(pipeline);
  bool certify_flag = false;
  pipeline->add_flag("--certify", certify_flag, "Attach instance audits to the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (o.deterministic && !o.seed_given) throw qmc::InputError("--deterministic requires --seed");
    if (o.format == "csv" && !*bench && !*pipeline) throw qmc::InputError("--format csv applies to bench and pipeline");
    if (*solve) return cmd_solve(o, dump_model);
    if (*round) return cmd_round(o);
    if (*energy) return cmd_energy(o);
    if (*exact) return cmd_exact(o);
    if (*certify) return cmd_certify(o, sweep, cut_samples, ratio_samples);
    if (*bench) return cmd_bench(o, bench_specs, suite_file);
    if (*pipeline) return cmd_pipeline(o, certify_flag);
  } catch (const qmc::SolverFailure& e) {
    std::cerr << "stage sdp: " << e.what() << "\n" << e.residuals.to_json().dump(2) << "\n";
    return kExitSolver;
  } catch (const qmc::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const qmc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}
