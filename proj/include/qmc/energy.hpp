#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "qmc/graph.hpp"
#include "qmc/rounding.hpp"

namespace qmc {

/// Closed-form <4 H_ij> on a cut edge of the rounded circuit state.
///
/// With c = cos 2theta, s = sin 2theta, and i the endpoint with z_i = 0:
///   <X_i X_j> = -s_ij A,  <Y_i Y_j> = -s_ij B,
///   <Z_i Z_j> = -(1/2)[prod_{k in D}(c_ik c_kj + s_ik s_kj) + prod_{k in D}(c_ik c_kj - s_ik s_kj)]
///               * prod_{k in N(i)\N(j)\{j}} c_ik * prod_{k in N(j)\N(i)\{i}} c_kj
/// where A = prod_{k in N(i)\{j}} c_ik, B = prod_{k in N(j)\{i}} c_kj, and
/// D = N(i) ∩ N(j). The ZZ product form equals the even-subset expansion.
struct CutEdgeTerms {
  double xx;
  double yy;
  double zz;
  double a;  // product over the z=0 endpoint's other neighbors
  double b;  // product over the z=1 endpoint's other neighbors

  double four_h() const { return 1.0 - xx - yy - zz; }
};

/// Throws InputError on an uncut edge.
CutEdgeTerms cut_edge_terms(const EdgeParameters& params, const Assignment& assign, const Graph& g,
                            const NeighborIndex& nbrs, std::size_t edge);

/// Exact <4 H_ij> for a cut edge. Throws InputError on an uncut edge.
double edge_energy_exact(const EdgeParameters& params, const Assignment& assign, const Graph& g,
                         std::size_t edge);
double edge_energy_exact(const EdgeParameters& params, const Assignment& assign, const Graph& g,
                         const NeighborIndex& nbrs, std::size_t edge);

/// Lower bound 1 + s_ij (A + B) + A B on cut edges, 0 on uncut edges.
/// Requires every theta >= 0.
double edge_energy_bound(const EdgeParameters& params, const Assignment& assign, const Graph& g,
                         std::size_t edge);
double edge_energy_bound(const EdgeParameters& params, const Assignment& assign, const Graph& g,
                         const NeighborIndex& nbrs, std::size_t edge);

enum class EnergyMode { Bound, ExactWhereCut };

struct EdgeEnergy {
  int i;
  int j;
  double weight;
  bool cut;
  std::optional<double> exact;  // <4 H_ij>, cut edges in ExactWhereCut mode
  double lower_bound;           // <4 H_ij> lower bound
};

struct EdgeEnergyReport {
  std::vector<EdgeEnergy> edges;
  double bound_total = 0.0;
  /// Exact on cut edges, 0 on uncut ones: itself a lower bound on <H>
  /// whenever some edge is uncut.
  std::optional<double> exact_total;
  bool exact_total_is_lower_bound = false;

  nlohmann::json to_json() const;
};

/// Totals are sum w_ij * (per-edge <4 H_ij>) / 4.
EdgeEnergyReport total_energy(const EdgeParameters& params, const Assignment& assign, const Graph& g,
                              EnergyMode mode);

}  // namespace qmc
