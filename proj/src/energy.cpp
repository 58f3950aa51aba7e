#include "qmc/energy.hpp"

#include <cmath>
#include <string>

#include "qmc/errors.hpp"

namespace qmc {

namespace {

void check_inputs(const EdgeParameters& params, const Assignment& assign, const Graph& g, std::size_t edge) {
  if (edge >= g.num_edges()) throw InputError("edge index out of range");
  if (params.theta.size() != g.num_edges()) throw InputError("parameters do not cover every edge");
  if (assign.z.size() != static_cast<std::size_t>(g.num_vertices())) {
    throw InputError("bit string length does not match the graph");
  }
}

}  // namespace

CutEdgeTerms cut_edge_terms(const EdgeParameters& params, const Assignment& assign, const Graph& g,
                            const NeighborIndex& nbrs, std::size_t edge) {
  check_inputs(params, assign, g, edge);
  int i = g.edge(edge).i;
  int j = g.edge(edge).j;
  if (!assign.cut(i, j)) {
    throw InputError("closed form applies to cut edges only; (" + std::to_string(i) + ", " +
                     std::to_string(j) + ") is uncut");
  }
  if (assign.z[i] != 0) std::swap(i, j);

  const auto& theta = params.theta;
  const double s_ij = std::sin(2 * theta[edge]);

  double a = 1.0, b = 1.0;
  double only_i = 1.0, only_j = 1.0;
  double plus = 1.0, minus = 1.0;
  for (const auto& nb : nbrs.neighbors(i)) {
    if (nb.vertex == j) continue;
    const double c_ik = std::cos(2 * theta[nb.edge]);
    a *= c_ik;
    if (auto kj = g.find_edge(nb.vertex, j)) {
      const double c_kj = std::cos(2 * theta[*kj]);
      const double ss = std::sin(2 * theta[nb.edge]) * std::sin(2 * theta[*kj]);
      plus *= c_ik * c_kj + ss;
      minus *= c_ik * c_kj - ss;
    } else {
      only_i *= c_ik;
    }
  }
  for (const auto& nb : nbrs.neighbors(j)) {
    if (nb.vertex == i) continue;
    const double c_kj = std::cos(2 * theta[nb.edge]);
    b *= c_kj;
    if (!nbrs.adjacent(nb.vertex, i)) only_j *= c_kj;
  }
  const double even_sum = 0.5 * (plus + minus) * only_i * only_j;
  return {-s_ij * a, -s_ij * b, -even_sum, a, b};
}

double edge_energy_exact(const EdgeParameters& params, const Assignment& assign, const Graph& g,
                         const NeighborIndex& nbrs, std::size_t edge) {
  return cut_edge_terms(params, assign, g, nbrs, edge).four_h();
}

double edge_energy_exact(const EdgeParameters& params, const Assignment& assign, const Graph& g,
                         std::size_t edge) {
  return edge_energy_exact(params, assign, g, NeighborIndex(g), edge);
}

double edge_energy_bound(const EdgeParameters& params, const Assignment& assign, const Graph& g,
                         const NeighborIndex& nbrs, std::size_t edge) {
  check_inputs(params, assign, g, edge);
  for (double t : params.theta) {
    if (t < 0) throw InputError("lower bound requires nonnegative circuit parameters");
  }
  int i = g.edge(edge).i;
  int j = g.edge(edge).j;
  if (!assign.cut(i, j)) return 0.0;

  double a = 1.0, b = 1.0;
  for (const auto& nb : nbrs.neighbors(i))
    if (nb.vertex != j) a *= std::cos(2 * params.theta[nb.edge]);
  for (const auto& nb : nbrs.neighbors(j))
    if (nb.vertex != i) b *= std::cos(2 * params.theta[nb.edge]);
  return 1.0 + std::sin(2 * params.theta[edge]) * (a + b) + a * b;
}

double edge_energy_bound(const EdgeParameters& params, const Assignment& assign, const Graph& g,
                         std::size_t edge) {
  return edge_energy_bound(params, assign, g, NeighborIndex(g), edge);
}

EdgeEnergyReport total_energy(const EdgeParameters& params, const Assignment& assign, const Graph& g,
                              EnergyMode mode) {
  NeighborIndex nbrs(g);
  EdgeEnergyReport rep;
  double exact_total = 0.0;
  for (std::size_t k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edge(k);
    EdgeEnergy ee{e.i, e.j, e.w, assign.cut(e.i, e.j), std::nullopt,
                  edge_energy_bound(params, assign, g, nbrs, k)};
    rep.bound_total += e.w * ee.lower_bound / 4;
    if (mode == EnergyMode::ExactWhereCut) {
      if (ee.cut) {
        ee.exact = edge_energy_exact(params, assign, g, nbrs, k);
        exact_total += e.w * *ee.exact / 4;
      } else {
        rep.exact_total_is_lower_bound = true;
      }
    }
    rep.edges.push_back(ee);
  }
  if (mode == EnergyMode::ExactWhereCut) rep.exact_total = exact_total;
  return rep;
}

nlohmann::json EdgeEnergyReport::to_json() const {
  nlohmann::json edges_json = nlohmann::json::array();
  for (const auto& e : edges) {
    nlohmann::json row = {{"i", e.i}, {"j", e.j}, {"w", e.weight}, {"cut", e.cut}, {"lower_bound", e.lower_bound}};
    row["exact"] = e.exact ? nlohmann::json(*e.exact) : nlohmann::json(nullptr);
    edges_json.push_back(row);
  }
  nlohmann::json doc = {{"edges", edges_json}, {"bound_total", bound_total}};
  doc["exact_total"] = exact_total ? nlohmann::json(*exact_total) : nlohmann::json(nullptr);
  doc["exact_total_is_lower_bound"] = exact_total_is_lower_bound;
  return doc;
}

}  // namespace qmc
