#include "qmc/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>

#include "qmc/errors.hpp"

namespace qmc {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t x = master ^ (counter * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string Assignment::bits() const {
  std::string s;
  s.reserve(z.size());
  for (auto b : z) s.push_back(b ? '1' : '0');
  return s;
}

Assignment sample_assignment(const VectorSolution& vs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Assignment out;
  out.seed = seed;
  out.basis = static_cast<Pauli>(1 + static_cast<int>(rng() % 3));
  // Only the sign of v . r matters, so r is left unnormalized.
  std::normal_distribution<double> normal;
  Eigen::VectorXd r(vs.dim());
  for (Eigen::Index k = 0; k < r.size(); ++k) r[k] = normal(rng);

  const int n = vs.index.num_vertices();
  out.z.resize(n);
  for (int i = 0; i < n; ++i) {
    double proj = vs.vectors.row(vs.index.single(i, out.basis)).dot(r);
    out.z[i] = proj >= 0.0 ? 1 : 0;
  }
  return out;
}

std::vector<double> compute_gammas(const VectorSolution& vs, const Graph& g, double tol) {
  const Eigen::VectorXd v0 = vs.unit();
  std::vector<double> gammas;
  gammas.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    Eigen::VectorXd shifted = v0 + vs.pair_sum(e.i, e.j);
    double len = shifted.norm();
    if (std::abs(len - 2.0) > tol) {
      throw NumericalError("corrupt solution: |v0 + v_ij| = " + std::to_string(len) + " on edge (" +
                           std::to_string(e.i) + ", " + std::to_string(e.j) + ")");
    }
    double normalized = -shifted.dot(v0) / (len * v0.norm());
    double simplified = -(1.0 + vs.pair_overlap(e.i, e.j)) / 2.0;
    if (std::abs(normalized - simplified) > tol) {
      throw NumericalError("gamma forms disagree on edge (" + std::to_string(e.i) + ", " +
                           std::to_string(e.j) + ")");
    }
    gammas.push_back(normalized);
  }
  return gammas;
}

double theta_map(double gamma, double alpha0) {
  constexpr double kSlack = 1e-6;
  if (gamma > 1.0 + kSlack || gamma < -1.0 - kSlack) {
    std::clog << "qmc: warning: gamma " << gamma << " outside [-1, 1], clamping\n";
  }
  gamma = std::clamp(gamma, -1.0, 1.0);
  return std::acos(std::exp(-alpha0 * std::max(gamma, 0.0))) / 2.0;
}

EdgeParameters edge_parameters(std::vector<double> gammas, double alpha0) {
  EdgeParameters p;
  p.alpha0 = alpha0;
  p.theta.reserve(gammas.size());
  for (double& g : gammas) {
    p.theta.push_back(theta_map(g, alpha0));
    g = std::clamp(g, -1.0, 1.0);
  }
  p.gamma = std::move(gammas);
  return p;
}

EdgeParameters edge_parameters(const VectorSolution& vs, const Graph& g, double alpha0, double tol) {
  return edge_parameters(compute_gammas(vs, g, tol), alpha0);
}

Circuit build_circuit(const Assignment& assign, const EdgeParameters& params, const Graph& g) {
  if (params.theta.size() != g.num_edges()) {
    throw InputError("circuit needs one parameter per edge (" + std::to_string(g.num_edges()) +
                     " edges, " + std::to_string(params.theta.size()) + " parameters)");
  }
  if (assign.z.size() != static_cast<std::size_t>(g.num_vertices())) {
    throw InputError("bit string length does not match the graph");
  }
  Circuit c;
  c.n = g.num_vertices();
  c.initial = assign.z;
  auto letter = [&](int v) { return assign.z[v] ? Pauli::X : Pauli::Y; };
  for (std::size_t k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edge(k);
    c.gates.push_back({e.i, e.j, params.theta[k], letter(e.i), letter(e.j)});
  }
  return c;
}

nlohmann::json rounding_outcome_json(const Assignment& assign, const EdgeParameters& params,
                                     const Graph& g) {
  nlohmann::json gamma = nlohmann::json::object();
  nlohmann::json theta = nlohmann::json::object();
  for (std::size_t k = 0; k < g.num_edges(); ++k) {
    std::string key = std::to_string(g.edge(k).i) + "-" + std::to_string(g.edge(k).j);
    gamma[key] = params.gamma[k];
    theta[key] = params.theta[k];
  }
  return {{"a", static_cast<int>(assign.basis)},
          {"z", assign.bits()},
          {"gamma", gamma},
          {"theta", theta},
          {"alpha0", params.alpha0},
          {"seed", assign.seed}};
}

}  // namespace qmc
