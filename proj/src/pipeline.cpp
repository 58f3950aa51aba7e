#include "qmc/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "qmc/energy.hpp"
#include "qmc/errors.hpp"
#include "qmc/rounding.hpp"

namespace qmc {

namespace {

class StageTimer {
 public:
  explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}

  void mark(const std::string& stage) {
    auto now = std::chrono::steady_clock::now();
    sink_[stage] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  std::map<std::string, double>& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

void RunConfig::validate() const {
  if (rounds < 1) throw InputError("rounds must be at least 1");
  if (deterministic && !seed) throw InputError("deterministic mode needs an explicit seed");
  if (!(alpha0 >= 0)) throw InputError("alpha0 must be nonnegative");
  if (sim_limit < 1 || sim_limit > 30) throw InputError("simulator limit must lie in [1, 30]");
  solver.validate();
}

RunReport run_pipeline(const Graph& g, const RunConfig& cfg, const std::string& instance) {
  cfg.validate();
  if (g.num_vertices() < 1) throw InputError("graph has no vertices");
  if (cfg.energy == EnergyEvaluation::Statevector && g.num_vertices() > cfg.sim_limit) {
    throw InputError("statevector evaluation requested but n = " + std::to_string(g.num_vertices()) +
                     " exceeds the simulator limit of " + std::to_string(cfg.sim_limit));
  }

  RunReport rep;
  rep.instance = instance;
  rep.n = g.num_vertices();
  rep.num_edges = g.num_edges();
  rep.edges = g.edges();
  rep.rounds = cfg.rounds;
  rep.alpha0 = cfg.alpha0;
  rep.master_seed = cfg.seed ? *cfg.seed : std::random_device{}();
  StageTimer timer(rep.timing);

  const SdpModel model = build_model(g);
  const GramSolution sol = solve(model, cfg.solver);
  rep.sdp_objective = sol.objective;
  rep.sdp_dual_bound = sol.dual_bound;
  rep.residuals = sol.residuals;
  timer.mark("sdp");

  const VectorSolution vs = extract_vectors(sol, cfg.solver);
  rep.extraction_error = vs.reconstruction_error;
  const EdgeParameters params = edge_parameters(vs, g, cfg.alpha0, 10 * cfg.solver.tol_extract);
  rep.gamma = params.gamma;
  rep.theta = params.theta;
  rep.monogamy_worst_slack = monogamy_audit(vs, g).worst_slack;
  rep.positive_gamma_worst = positive_gamma_audit(params.gamma, g).worst;
  rep.pair_identity_worst = check_pair_identities(vs).worst();
  timer.mark("extract");

  rep.energies_exact = cfg.energy == EnergyEvaluation::Statevector ||
                       (cfg.energy == EnergyEvaluation::Auto && g.num_vertices() <= cfg.sim_limit);
  rep.selection_criterion = rep.energies_exact ? "statevector energy" : "closed-form lower bound";

  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < cfg.rounds; ++s) {
    const std::uint64_t seed = derive_seed(rep.master_seed, s);
    const Assignment assign = sample_assignment(vs, seed);
    double energy = 0.0;
    if (rep.energies_exact) {
      energy = expectation(simulate(build_circuit(assign, params, g), cfg.sim_limit), g);
    } else {
      energy = *total_energy(params, assign, g, EnergyMode::ExactWhereCut).exact_total;
    }
    sum += energy;
    sum_sq += energy * energy;
    if (s == 0 || energy > rep.best.energy) rep.best = {s, seed, assign.basis, assign.bits(), energy};
  }
  const double m = static_cast<double>(cfg.rounds);
  rep.mean_energy = sum / m;
  rep.stderr_energy =
      cfg.rounds > 1 ? std::sqrt(std::max(0.0, (sum_sq - m * rep.mean_energy * rep.mean_energy) / (m - 1)) / m) : 0.0;
  timer.mark("rounding");

  if (rep.sdp_objective > 0) {
    rep.ratio_mean_sdp = rep.mean_energy / rep.sdp_objective;
    rep.ratio_best_sdp = rep.best.energy / rep.sdp_objective;
  }
  if (g.num_vertices() <= cfg.opt_limit) {
    const SpectrumResult spec = exact_opt(g, cfg.opt_limit);
    rep.opt = spec.lambda_max;
    rep.opt_sector = spec.sector;
    if (spec.lambda_max > 0) {
      rep.ratio_mean_opt = rep.mean_energy / spec.lambda_max;
      rep.ratio_best_opt = rep.best.energy / spec.lambda_max;
    }
    timer.mark("exact");
  }

  if (cfg.certify) {
    Certificate cert = certify_constants(cfg.alpha0);
    InstanceAuditOptions opts = cfg.audit;
    opts.seed = derive_seed(rep.master_seed, 0xCE27);
    opts.sim_limit = cfg.sim_limit;
    opts.tol_extract = cfg.solver.tol_extract;
    audit_instance(cert, vs, g, opts);
    rep.certificate = std::move(cert);
    timer.mark("certify");
  }
  return rep;
}

nlohmann::json RunReport::to_json(bool include_timing) const {
  auto opt_json = [](const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json edges_json = nlohmann::json::array();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    edges_json.push_back({{"i", edges[k].i}, {"j", edges[k].j}, {"w", edges[k].w},
                          {"gamma", gamma[k]}, {"theta", theta[k]}});
  }
  nlohmann::json doc;
  doc["schema"] = kReportSchema;
  doc["instance"] = instance;
  doc["n"] = n;
  doc["num_edges"] = num_edges;
  doc["sdp"] = {{"objective", sdp_objective},
                {"dual_bound", sdp_dual_bound},
                {"residuals", residuals.to_json()},
                {"extraction_error", extraction_error}};
  doc["opt"] = opt_json(opt);
  doc["opt_sector"] = opt_json(opt_sector);
  doc["rounding"] = {{"rounds", rounds},
                     {"master_seed", master_seed},
                     {"alpha0", alpha0},
                     {"energy_evaluation", energies_exact ? "statevector" : "closed_form_lower_bound"},
                     {"selection_criterion", selection_criterion},
                     {"edges", edges_json}};
  doc["best"] = {{"sample", best.index},
                 {"seed", best.seed},
                 {"a", static_cast<int>(best.basis)},
                 {"z", best.z},
                 {"energy", best.energy}};
  doc["mean_energy"] = mean_energy;
  doc["stderr_energy"] = stderr_energy;
  doc["ratios"] = {{"mean_over_sdp", ratio_mean_sdp},
                   {"best_over_sdp", ratio_best_sdp},
                   {"mean_over_opt", opt_json(ratio_mean_opt)},
                   {"best_over_opt", opt_json(ratio_best_opt)}};
  nlohmann::json summary = {{"monogamy_worst_slack", monogamy_worst_slack},
                            {"positive_gamma_worst", positive_gamma_worst},
                            {"pair_identity_worst", pair_identity_worst}};
  if (certificate) summary["certificate"] = certificate->to_json();
  doc["certificate"] = summary;
  if (include_timing) doc["timing"] = timing;
  return doc;
}

std::string bench_csv(const std::vector<BenchInstance>& suite, const RunConfig& cfg) {
  std::ostringstream os;
  os << kBenchHeader << "\n";
  for (const auto& inst : suite) {
    os << inst.name << "," << inst.graph.num_vertices() << "," << inst.graph.num_edges() << ",";
    try {
      const RunReport rep = run_pipeline(inst.graph, cfg, inst.name);
      os << format_double(rep.sdp_objective) << "," << (rep.opt ? format_double(*rep.opt) : "") << ","
         << format_double(rep.ratio_mean_sdp) << "," << format_double(rep.ratio_best_sdp) << ","
         << (rep.ratio_mean_opt ? format_double(*rep.ratio_mean_opt) : "") << ",";
      if (cfg.deterministic) {
        os << ",,";
      } else {
        os << format_double(rep.timing.at("sdp")) << "," << format_double(rep.timing.at("rounding")) << ",";
      }
      os << "\n";
    } catch (const SolverFailure&) {
      os << ",,,,,,,sdp_failure\n";
    } catch (const std::exception&) {
      os << ",,,,,,,error\n";
    }
  }
  return os.str();
}

}  // namespace qmc
