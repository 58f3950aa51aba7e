#include "qmc/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qmc/energy.hpp"
#include "qmc/errors.hpp"
#include "qmc/oracle.hpp"

namespace qmc {

Minimum grid_minimum(const std::function<double(double)>& f, double lo, double hi, int grid_points) {
  Minimum best{f(lo), lo};
  for (int k = 1; k <= grid_points; ++k) {
    double x = lo + (hi - lo) * k / grid_points;
    double v = f(x);
    if (v < best.value) best = {v, x};
  }
  return best;
}

Minimum minimize_1d(const std::function<double(double)>& f, double lo, double hi, int grid_points,
                    double width) {
  const double h = (hi - lo) / grid_points;
  Minimum coarse = grid_minimum(f, lo, hi, grid_points);
  double a = std::max(lo, coarse.argmin - h);
  double b = std::min(hi, coarse.argmin + h);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > width) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  Minimum best = coarse;
  for (double x : {a, b, 0.5 * (a + b)}) {
    double v = f(x);
    if (v < best.value) best = {v, x};
  }
  return best;
}

double gw_ratio(double t) { return std::acos(t) / std::numbers::pi / ((1.0 - t) / 2.0); }

Minimum alpha_gw() {
  // The ratio blows up at t = 1; the minimizer sits near t = -0.689.
  return minimize_1d(gw_ratio, -1.0, 1.0 - 1e-9);
}

namespace {

double ratio_bracket(double gamma, double alpha0, double sin_term) {
  return 1.0 + 2.0 * sin_term * std::exp(-alpha0 * (1.0 - gamma)) + std::exp(-2.0 * alpha0 * (1.0 - gamma));
}

const double kAlphaGw = alpha_gw().value;

}  // namespace

double ratio_bound(double gamma, double alpha0, double agw) {
  double surd = std::sqrt(1.0 - std::exp(-2.0 * alpha0 * gamma));
  return agw / 6.0 * ratio_bracket(gamma, alpha0, surd) * (2.0 + gamma) / (1.0 + gamma);
}

double ratio_bound_sin_form(double gamma, double alpha0, double agw) {
  double sine = std::sin(std::acos(std::exp(-alpha0 * gamma)));
  return agw / 6.0 * ratio_bracket(gamma, alpha0, sine) * (2.0 + gamma) / (1.0 + gamma);
}

Minimum ratio_constant(double alpha0) {
  if (!(alpha0 >= 0)) throw InputError("alpha0 must be nonnegative");
  return minimize_1d([&](double g) { return ratio_bound(g, alpha0, kAlphaGw); }, 0.0, 1.0);
}

Alpha0Sweep sweep_alpha0(double lo, double hi, double step) {
  if (!(step > 0) || hi < lo || lo < 0) throw InputError("invalid alpha0 sweep range");
  Alpha0Sweep sweep;
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int k = 0; k <= count; ++k) {
    double a0 = lo + k * step;
    double r = ratio_constant(a0).value;
    sweep.points.emplace_back(a0, r);
    if (k == 0 || r > sweep.best_ratio) {
      sweep.best_ratio = r;
      sweep.best_alpha0 = a0;
    }
  }
  return sweep;
}

nlohmann::json AuditResult::to_json() const {
  return {{"name", name}, {"passed", passed}, {"residual", residual}, {"detail", detail}};
}

MonogamyReport monogamy_audit(const VectorSolution& vs, const Graph& g) {
  NeighborIndex nbrs(g);
  MonogamyReport rep;
  for (int v = 0; v < g.num_vertices(); ++v) {
    double star = 0.0;
    for (const auto& nb : nbrs.neighbors(v)) star += (1.0 - vs.pair_overlap(v, nb.vertex)) / 4.0;
    int d = nbrs.degree(v);
    double slack = (d + 1) / 2.0 - star;
    rep.vertices.push_back({v, d, star, slack});
    if (v == 0 || slack < rep.worst_slack) rep.worst_slack = slack;
  }
  return rep;
}

PositiveGammaReport positive_gamma_audit(const std::vector<double>& gammas, const Graph& g) {
  PositiveGammaReport rep;
  rep.sums.assign(g.num_vertices(), 0.0);
  for (std::size_t k = 0; k < g.num_edges(); ++k) {
    if (gammas[k] <= 0) continue;
    rep.sums[g.edge(k).i] += gammas[k];
    rep.sums[g.edge(k).j] += gammas[k];
  }
  rep.worst = rep.sums.empty() ? 0.0 : *std::max_element(rep.sums.begin(), rep.sums.end());
  return rep;
}

CutProbabilityReport cut_probability_audit(const VectorSolution& vs, const Graph& g, std::size_t samples,
                                           std::uint64_t seed) {
  if (samples < 10000) throw InputError("cut probability audit needs at least 10^4 samples");
  const std::vector<double> gammas = compute_gammas(vs, g);
  std::vector<std::size_t> cuts(g.num_edges(), 0);
  for (std::size_t s = 0; s < samples; ++s) {
    Assignment assign = sample_assignment(vs, derive_seed(seed, s));
    for (std::size_t k = 0; k < g.num_edges(); ++k)
      if (assign.cut(g.edge(k).i, g.edge(k).j)) ++cuts[k];
  }
  CutProbabilityReport rep;
  rep.samples = samples;
  const double sigma = std::sqrt(0.25 / static_cast<double>(samples));
  for (std::size_t k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edge(k);
    double predicted = 0.0;
    for (Pauli a : kPaulis) {
      double dot = std::clamp(vs.single(e.i, a).dot(vs.single(e.j, a)), -1.0, 1.0);
      predicted += std::acos(dot) / std::numbers::pi / 3.0;
    }
    EdgeCutStat st{e.i, e.j, gammas[k], static_cast<double>(cuts[k]) / samples, predicted,
                   kAlphaGw / 3.0 * (2.0 + gammas[k]), sigma, false};
    st.flagged = st.empirical < st.bound - 5 * sigma;
    rep.passed = rep.passed && !st.flagged;
    rep.edges.push_back(st);
  }
  return rep;
}

EdgeRatioReport per_edge_ratio_audit(const VectorSolution& vs, const Graph& g, std::size_t samples,
                                     std::uint64_t seed, double alpha0, int sim_limit, double target) {
  if (samples < 2) throw InputError("per-edge ratio audit needs at least 2 samples");
  const EdgeParameters params = edge_parameters(vs, g, alpha0);
  const NeighborIndex nbrs(g);
  EdgeRatioReport rep;
  rep.samples = samples;
  rep.exact = g.num_vertices() <= sim_limit;
  rep.target = target;

  std::vector<double> sum(g.num_edges(), 0.0), sum_sq(g.num_edges(), 0.0);
  for (std::size_t s = 0; s < samples; ++s) {
    Assignment assign = sample_assignment(vs, derive_seed(seed, s));
    std::optional<StateVector> psi;
    if (rep.exact) psi = simulate(build_circuit(assign, params, g), sim_limit);
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
      double v = psi ? pair_correlations(*psi, g.edge(k).i, g.edge(k).j).four_h()
                     : edge_energy_bound(params, assign, g, nbrs, k);
      sum[k] += v;
      sum_sq[k] += v * v;
    }
  }
  const double m = static_cast<double>(samples);
  for (std::size_t k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edge(k);
    EdgeRatioStat st{e.i, e.j, 1.0 - vs.pair_overlap(e.i, e.j), sum[k] / m, 0.0, 0.0, false, false};
    double var = std::max(0.0, (sum_sq[k] - m * st.mean_four_h * st.mean_four_h) / (m - 1));
    if (st.sdp_share <= 1e-6) {
      st.skipped = true;
    } else {
      st.ratio = st.mean_four_h / st.sdp_share;
      st.sigma = std::sqrt(var / m) / st.sdp_share;
      st.flagged = st.ratio < target - 5 * st.sigma;
    }
    rep.passed = rep.passed && !st.flagged;
    rep.edges.push_back(st);
  }
  return rep;
}

bool Certificate::passed() const {
  return std::all_of(audits.begin(), audits.end(), [](const auto& a) { return a.passed; });
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json doc = {{"alpha_gw", alpha_gw},
                        {"alpha_gw_argmin_t", alpha_gw_argmin_t},
                        {"ratio_constant", ratio_constant},
                        {"ratio_argmin_gamma", ratio_argmin_gamma},
                        {"alpha0_used", alpha0_used},
                        {"passed", passed()}};
  doc["monogamy_worst_slack"] = monogamy_worst_slack ? nlohmann::json(*monogamy_worst_slack) : nlohmann::json(nullptr);
  if (sweep) {
    doc["sweep"] = {{"best_alpha0", sweep->best_alpha0}, {"best_ratio", sweep->best_ratio}};
  }
  auto& list = doc["audits"] = nlohmann::json::array();
  for (const auto& a : audits) list.push_back(a.to_json());
  return doc;
}

Certificate certify_constants(double alpha0, bool sweep) {
  Certificate cert;
  const Minimum gw = alpha_gw();
  cert.alpha_gw = gw.value;
  cert.alpha_gw_argmin_t = gw.argmin;
  const Minimum ratio = ratio_constant(alpha0);
  cert.ratio_constant = ratio.value;
  cert.ratio_argmin_gamma = ratio.argmin;
  cert.alpha0_used = alpha0;

  auto add = [&](std::string name, double residual, std::string detail = {}) {
    cert.audits.push_back({std::move(name), residual >= 0, residual, std::move(detail)});
  };

  const Minimum gw_grid = grid_minimum(gw_ratio, -1.0, 1.0 - 1e-9, 1000000);
  add("alpha_gw_grid_agreement", 1e-6 - std::abs(gw_grid.value - gw.value));

  auto f = [&](double g) { return ratio_bound(g, alpha0, gw.value); };
  const Minimum ratio_grid = grid_minimum(f, 0.0, 1.0, 1000000);
  add("ratio_grid_agreement", 1e-6 - std::abs(ratio_grid.value - ratio.value));

  double worst_form = 0.0;
  for (int k = 0; k <= 10000; ++k) {
    double g = k / 10000.0;
    worst_form = std::max(worst_form, std::abs(ratio_bound(g, alpha0, gw.value) -
                                               ratio_bound_sin_form(g, alpha0, gw.value)));
  }
  add("sin_surd_forms_agree", 1e-12 - worst_form);

  // For gamma <= 0, theta_ij = 0 and A, B >= e^{-alpha0}, so the per-edge
  // ratio is at least (a_gw/6)(1 + e^{-2 alpha0})(2+g)/(1+g), decreasing in g.
  double case1_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10000; ++k) {
    double g = -1.0 + (k + 1) / 10000.0;
    double bound = gw.value / 6.0 * (1.0 + std::exp(-2.0 * alpha0)) * (2.0 + g) / (1.0 + g);
    case1_margin = std::min(case1_margin, bound - f(0.0));
  }
  add("nonpositive_gamma_dominated", case1_margin + 1e-12);

  add("ratio_in_unit_interval", std::min(ratio.value, 1.0 - ratio.value));

  if (sweep) cert.sweep = sweep_alpha0();
  return cert;
}

void audit_instance(Certificate& cert, const VectorSolution& vs, const Graph& g,
                    const InstanceAuditOptions& opts) {
  const double tol = 10 * opts.tol_extract;
  auto add = [&](std::string name, double residual, std::string detail = {}) {
    cert.audits.push_back({std::move(name), residual >= 0, residual, std::move(detail)});
  };

  const PairIdentityReport ids = check_pair_identities(vs);
  add("pair_norm_identity", tol - ids.norm_error);
  add("pair_sphere_identity", tol - ids.sphere_error);
  add("pair_chain_identity", tol - ids.chain_error);
  add("pair_overlap_range", std::min(ids.min_overlap + 3.0, 1.0 - ids.max_overlap) + tol);

  const MonogamyReport mono = monogamy_audit(vs, g);
  cert.monogamy_worst_slack = mono.worst_slack;
  add("monogamy", mono.worst_slack + tol);

  const std::vector<double> gammas = compute_gammas(vs, g);
  const PositiveGammaReport pos = positive_gamma_audit(gammas, g);
  add("positive_gamma_sum", 1.0 + tol - pos.worst);

  if (g.num_edges() == 0) return;
  const CutProbabilityReport cuts = cut_probability_audit(vs, g, opts.cut_samples, opts.seed);
  double cut_margin = std::numeric_limits<double>::infinity();
  for (const auto& e : cuts.edges) cut_margin = std::min(cut_margin, e.empirical - (e.bound - 5 * e.sigma));
  add("cut_probability", cut_margin, std::to_string(opts.cut_samples) + " samples");

  const EdgeRatioReport ratios =
      per_edge_ratio_audit(vs, g, opts.ratio_samples, derive_seed(opts.seed, 0xA11CE), cert.alpha0_used,
                           opts.sim_limit);
  double ratio_margin = std::numeric_limits<double>::infinity();
  std::size_t skipped = 0;
  for (const auto& e : ratios.edges) {
    if (e.skipped) {
      ++skipped;
      continue;
    }
    ratio_margin = std::min(ratio_margin, e.ratio - (ratios.target - 5 * e.sigma));
  }
  if (std::isinf(ratio_margin)) ratio_margin = 0.0;
  add("per_edge_ratio", ratio_margin,
      std::string(ratios.exact ? "statevector" : "closed-form bound") + ", " +
          std::to_string(skipped) + " edges skipped");
}

}  // namespace qmc
