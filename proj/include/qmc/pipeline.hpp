#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmc/certify.hpp"
#include "qmc/graph.hpp"
#include "qmc/oracle.hpp"
#include "qmc/sdp.hpp"

namespace qmc {

inline constexpr const char* kReportSchema = "qmc-report/1";

enum class EnergyEvaluation { Auto, Statevector, ClosedForm };

struct RunConfig {
  std::size_t rounds = 1000;
  std::optional<std::uint64_t> seed;  // required when deterministic
  double alpha0 = kDefaultAlpha0;
  SolverConfig solver;
  int sim_limit = kDefaultSimLimit;
  int opt_limit = 12;  // exact lambda_max only up to this many qubits
  EnergyEvaluation energy = EnergyEvaluation::Auto;
  bool deterministic = false;
  bool certify = false;
  InstanceAuditOptions audit;

  void validate() const;
};

struct SampleSummary {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  Pauli basis = Pauli::X;
  std::string z;
  double energy = 0.0;
};

struct RunReport {
  std::string instance;
  int n = 0;
  std::size_t num_edges = 0;
  double sdp_objective = 0.0;
  double sdp_dual_bound = 0.0;
  GramResiduals residuals;
  double extraction_error = 0.0;
  std::optional<double> opt;
  std::optional<int> opt_sector;

  std::size_t rounds = 0;
  std::uint64_t master_seed = 0;
  bool energies_exact = true;  // statevector; otherwise closed-form lower bounds
  std::string selection_criterion;
  SampleSummary best;
  double mean_energy = 0.0;
  double stderr_energy = 0.0;
  std::vector<double> gamma;
  std::vector<double> theta;
  std::vector<Edge> edges;

  double ratio_mean_sdp = 0.0;
  double ratio_best_sdp = 0.0;
  std::optional<double> ratio_mean_opt;
  std::optional<double> ratio_best_opt;

  double alpha0 = kDefaultAlpha0;
  double monogamy_worst_slack = 0.0;
  double positive_gamma_worst = 0.0;
  double pair_identity_worst = 0.0;
  std::optional<Certificate> certificate;

  std::map<std::string, double> timing;  // seconds per stage

  /// Timing is left out when `include_timing` is false so that reruns are
  /// byte-identical.
  nlohmann::json to_json(bool include_timing = true) const;
};

/// Solve, round `rounds` times, evaluate every sample, and summarize.
/// Throws SolverFailure (stage "sdp") or InputError.
RunReport run_pipeline(const Graph& g, const RunConfig& cfg, const std::string& instance = "");

struct BenchInstance {
  std::string name;
  Graph graph;
};

inline constexpr const char* kBenchHeader =
    "instance,n,edges,opt_sdp,opt,mean_ratio,best_ratio,mean_ratio_opt,solve_seconds,round_seconds,error";

/// One CSV row per instance. Failures become rows with an error tag. In
/// deterministic mode timing columns are left blank.
std::string bench_csv(const std::vector<BenchInstance>& suite, const RunConfig& cfg);

}  // namespace qmc
