#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmc/graph.hpp"
#include "qmc/rounding.hpp"
#include "qmc/sdp.hpp"

namespace qmc {

struct Minimum {
  double value;
  double argmin;
};

/// Dense grid of `grid_points` samples on [lo, hi], then golden-section
/// refinement of the best bracket down to `width`.
Minimum minimize_1d(const std::function<double(double)>& f, double lo, double hi,
                    int grid_points = 10000, double width = 1e-8);

/// Grid-only minimum, the independent route used to cross-check minimize_1d.
Minimum grid_minimum(const std::function<double(double)>& f, double lo, double hi, int grid_points);

/// (1/pi) arccos(t) / ((1 - t)/2); diverges as t -> 1.
double gw_ratio(double t);

/// Goemans-Williamson constant, min of gw_ratio on [-1, 1).
Minimum alpha_gw();

/// Per-edge worst-case ratio as a function of gamma in [0, 1]:
/// (a_gw/6) [1 + 2 sqrt(1 - e^{-2 a0 g}) e^{-a0 (1-g)} + e^{-2 a0 (1-g)}] (2+g)/(1+g).
double ratio_bound(double gamma, double alpha0, double agw);
/// Same, with the sqrt written as sin(arccos(e^{-a0 g})).
double ratio_bound_sin_form(double gamma, double alpha0, double agw);

/// min over gamma in [0, 1] of ratio_bound. Negative gamma is dominated by
/// gamma = 0 (theta is 0 there) and is never evaluated.
Minimum ratio_constant(double alpha0 = kDefaultAlpha0);

struct Alpha0Sweep {
  double best_alpha0 = 0.0;
  double best_ratio = 0.0;
  std::vector<std::pair<double, double>> points;  // (alpha0, ratio)
};

Alpha0Sweep sweep_alpha0(double lo = 0.0, double hi = 0.2, double step = 1e-3);

struct AuditResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;  // signed margin; negative means violated
  std::string detail;

  nlohmann::json to_json() const;
};

struct VertexSlack {
  int vertex;
  int degree;
  double sdp_star_value;  // (1/4) sum_j (v0 - v_ij).v0 over graph neighbors
  double slack;           // (d + 1)/2 - sdp_star_value
};

struct MonogamyReport {
  std::vector<VertexSlack> vertices;
  double worst_slack = 0.0;
};

MonogamyReport monogamy_audit(const VectorSolution& vs, const Graph& g);

/// Sum of the positive gammas around each vertex, which monogamy caps at 1.
struct PositiveGammaReport {
  std::vector<double> sums;
  double worst = 0.0;  // max over vertices
};

PositiveGammaReport positive_gamma_audit(const std::vector<double>& gammas, const Graph& g);

struct EdgeCutStat {
  int i;
  int j;
  double gamma;
  double empirical;
  double predicted;  // (1/3) sum_a arccos(v_{i,a}.v_{j,a}) / pi
  double bound;      // (a_gw/3)(2 + gamma)
  double sigma;
  bool flagged;      // empirical < bound - 5 sigma
};

struct CutProbabilityReport {
  std::size_t samples = 0;
  std::vector<EdgeCutStat> edges;
  bool passed = true;
};

CutProbabilityReport cut_probability_audit(const VectorSolution& vs, const Graph& g, std::size_t samples,
                                           std::uint64_t seed);

struct EdgeRatioStat {
  int i;
  int j;
  double sdp_share;  // (v0 - v_ij).v0
  double mean_four_h;
  double ratio;
  double sigma;
  bool skipped;  // vanishing SDP share
  bool flagged;  // ratio < target - 5 sigma
};

struct EdgeRatioReport {
  std::size_t samples = 0;
  bool exact = false;  // statevector energies (else closed-form lower bounds)
  double target = 0.562;
  std::vector<EdgeRatioStat> edges;
  bool passed = true;
};

/// Monte Carlo estimate of E[<4 H_ij>] / (v0 - v_ij).v0 per edge. Uses the
/// statevector when n <= sim_limit, otherwise the closed-form lower bound.
EdgeRatioReport per_edge_ratio_audit(const VectorSolution& vs, const Graph& g, std::size_t samples,
                                     std::uint64_t seed, double alpha0 = kDefaultAlpha0,
                                     int sim_limit = 16, double target = 0.562);

struct Certificate {
  double alpha_gw = 0.0;
  double alpha_gw_argmin_t = 0.0;
  double ratio_constant = 0.0;
  double ratio_argmin_gamma = 0.0;
  double alpha0_used = kDefaultAlpha0;
  std::optional<Alpha0Sweep> sweep;
  std::optional<double> monogamy_worst_slack;
  std::vector<AuditResult> audits;

  bool passed() const;
  nlohmann::json to_json() const;
};

/// Constants plus their self-consistency audits (two minimization routes,
/// sin/sqrt forms). With `sweep`, also the alpha0 sweep.
Certificate certify_constants(double alpha0 = kDefaultAlpha0, bool sweep = false);

struct InstanceAuditOptions {
  std::size_t cut_samples = 100000;
  std::size_t ratio_samples = 10000;
  std::uint64_t seed = 0;
  int sim_limit = 16;
  double tol_extract = 1e-6;
};

/// Appends per-instance audits (pair identities, monogamy, positive-gamma
/// sums, cut probability, per-edge ratios) for a solved instance.
void audit_instance(Certificate& cert, const VectorSolution& vs, const Graph& g,
                    const InstanceAuditOptions& opts);

}  // namespace qmc
