#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmc/graph.hpp"
#include "qmc/sdp.hpp"

namespace qmc {

inline constexpr double kDefaultAlpha0 = 0.041;

/// Counter-based seed derivation (splitmix64 finalizer over master ^ f(counter)).
/// Sample k of a run uses derive_seed(master, k) so any sample can be
/// reproduced on its own.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

/// Hyperplane-rounded bit string. z[i] = 1 iff v_{i,a} . r >= 0.
struct Assignment {
  Pauli basis = Pauli::X;
  std::vector<std::uint8_t> z;
  std::uint64_t seed = 0;

  bool cut(int i, int j) const { return z[i] != z[j]; }
  std::string bits() const;  // z[0] first
};

/// Picks a uniformly from {X, Y, Z} and r with iid standard normal
/// components; sgn(0) counts as +1.
Assignment sample_assignment(const VectorSolution& vs, std::uint64_t seed);

/// Per-edge gamma = -(v0 + v_ij).v0 / (|v0 + v_ij| |v0|), cross-checked
/// against -(1 + v_ij.v0)/2. Throws NumericalError if |v0 + v_ij| strays from
/// 2 or the two forms disagree by more than `tol`.
std::vector<double> compute_gammas(const VectorSolution& vs, const Graph& g, double tol = 1e-5);

/// theta = arccos(exp(-alpha0 * max(gamma, 0))) / 2.
double theta_map(double gamma, double alpha0 = kDefaultAlpha0);

struct EdgeParameters {
  std::vector<double> gamma;  // indexed like Graph::edges()
  std::vector<double> theta;
  double alpha0 = kDefaultAlpha0;
};

EdgeParameters edge_parameters(const VectorSolution& vs, const Graph& g,
                               double alpha0 = kDefaultAlpha0, double tol = 1e-5);
/// Builds parameters from given gammas (clamped to [-1, 1]).
EdgeParameters edge_parameters(std::vector<double> gammas, double alpha0 = kDefaultAlpha0);

/// exp(i theta P_i P_j) with P = X where z = 1 and P = Y where z = 0.
struct Gate {
  int i;
  int j;
  double theta;
  Pauli pi;
  Pauli pj;
};

struct Circuit {
  int n = 0;
  std::vector<std::uint8_t> initial;
  std::vector<Gate> gates;  // canonical edge order; all gates commute
};

/// One gate per edge. Throws InputError if params do not cover every edge.
Circuit build_circuit(const Assignment& assign, const EdgeParameters& params, const Graph& g);

/// {a, z, gamma: {"i-j": v}, theta: {"i-j": v}, alpha0, seed}
nlohmann::json rounding_outcome_json(const Assignment& assign, const EdgeParameters& params,
                                     const Graph& g);

}  // namespace qmc
