#pragma once

// Independent references for the unit and acceptance tests. Nothing here
// calls into the oracle module: Hamiltonians are assembled from Kronecker
// products of 2x2 Pauli matrices and diagonalized densely.

#include <complex>
#include <map>
#include <string>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qmc/graph.hpp"
#include "qmc/sdp.hpp"

namespace qmc::testing {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline CMatrix pauli_matrix(int a) {
  CMatrix m(2, 2);
  const cplx i(0, 1);
  switch (a) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: m = CMatrix::Identity(2, 2);
  }
  return m;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

// Pauli string with letters[q] acting on qubit q. Little-endian: qubit 0 is
// the least significant bit, so it is the rightmost Kronecker factor.
inline CMatrix pauli_string(const std::vector<int>& letters) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = static_cast<int>(letters.size()) - 1; q >= 0; --q) out = kron(out, pauli_matrix(letters[q]));
  return out;
}

inline CMatrix two_site(int n, int i, int j, int a) {
  std::vector<int> letters(n, 0);
  letters[i] = a;
  letters[j] = a;
  return pauli_string(letters);
}

inline CMatrix dense_hamiltonian(const Graph& g) {
  const int n = g.num_vertices();
  const Eigen::Index dim = Eigen::Index(1) << n;
  CMatrix h = CMatrix::Zero(dim, dim);
  for (const auto& e : g.edges()) {
    CMatrix term = CMatrix::Identity(dim, dim);
    for (int a = 1; a <= 3; ++a) term -= two_site(n, e.i, e.j, a);
    h += (e.w / 4) * term;
  }
  return h;
}

inline double dense_lambda_max(const Graph& g) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(dense_hamiltonian(g), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

inline double dense_expectation(const CMatrix& op, const CVector& psi) { return psi.dot(op * psi).real(); }

inline CVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CVector psi(Eigen::Index(1) << n);
  for (auto& x : psi) x = cplx(normal(rng), normal(rng));
  return psi / psi.norm();
}

// Moment matrix built from explicit Pauli strings:
// M(P, Q) = Re <psi| (PQ + QP)/2 |psi>.
inline Eigen::MatrixXd dense_moment_matrix(const CVector& psi, const GramIndex& index) {
  const int n = index.num_vertices();
  std::vector<CMatrix> ops;
  for (const auto& label : index.labels()) {
    std::vector<int> letters(n, 0);
    if (label.kind != GramLabel::Kind::Unit) letters[label.i] = static_cast<int>(label.a);
    if (label.kind == GramLabel::Kind::Pair) letters[label.j] = static_cast<int>(label.a);
    ops.push_back(pauli_string(letters));
  }
  const int size = index.size();
  Eigen::MatrixXd m(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = r; c < size; ++c) {
      CMatrix sym = (ops[r] * ops[c] + ops[c] * ops[r]) / 2.0;
      m(r, c) = m(c, r) = dense_expectation(sym, psi);
    }
  return m;
}

inline Graph diamond() { return Graph(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}}); }

struct Solved {
  Graph graph;
  SdpModel model;
  GramSolution gram;
  VectorSolution vectors;
};

// Solves each instance once per test binary. "diamond" names diamond();
// anything else is a generator spec.
inline const Solved& solved_instance(const std::string& spec) {
  static std::map<std::string, Solved> cache;
  auto it = cache.find(spec);
  if (it == cache.end()) {
    Graph g = spec == "diamond" ? diamond() : generate(parse_generator_spec(spec));
    SdpModel model = build_model(g);
    SolverConfig cfg;
    GramSolution sol = solve(model, cfg);
    VectorSolution vs = extract_vectors(sol, cfg);
    it = cache.emplace(spec, Solved{g, model, sol, vs}).first;
  }
  return it->second;
}

}  // namespace qmc::testing
