#include "qmc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qmc/errors.hpp"

namespace qmc {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

// P|b> = phase(P, b) |b ^ flip(P)>
bool flips(Pauli p) { return p != Pauli::Z; }

cplx phase(Pauli p, bool bit) {
  switch (p) {
    case Pauli::X: return 1.0;
    case Pauli::Y: return bit ? -kI : kI;
    case Pauli::Z: return bit ? -1.0 : 1.0;
  }
  return 1.0;
}

// psi -> P_q psi for a single-qubit Pauli.
void apply_pauli(std::vector<cplx>& amp, int q, Pauli p) {
  const std::size_t mask = std::size_t{1} << q;
  if (!flips(p)) {
    for (std::size_t b = 0; b < amp.size(); ++b)
      if (b & mask) amp[b] = -amp[b];
    return;
  }
  for (std::size_t b = 0; b < amp.size(); ++b) {
    if (b & mask) continue;
    cplx lo = amp[b], hi = amp[b | mask];
    // new[b] = phase(p, 1) * old[b|mask]; new[b|mask] = phase(p, 0) * old[b]
    amp[b] = phase(p, true) * hi;
    amp[b | mask] = phase(p, false) * lo;
  }
}

void check_qubits(int n, int limit, const char* what) {
  if (n > limit) {
    throw InputError(std::string(what) + ": " + std::to_string(n) + " qubits exceeds the limit of " +
                     std::to_string(limit));
  }
  if (n > 30) throw InputError(std::string(what) + ": too many qubits");
}

}  // namespace

double StateVector::norm() const {
  double s = 0;
  for (const auto& a : amp) s += std::norm(a);
  return std::sqrt(s);
}

double StateVector::overlap(const StateVector& other) const {
  cplx s = 0;
  for (std::size_t b = 0; b < amp.size(); ++b) s += std::conj(amp[b]) * other.amp[b];
  return std::abs(s);
}

StateVector basis_state(const std::vector<std::uint8_t>& bits) {
  StateVector psi;
  psi.n = static_cast<int>(bits.size());
  check_qubits(psi.n, 30, "basis state");
  psi.amp.assign(std::size_t{1} << psi.n, 0.0);
  std::size_t index = 0;
  for (int q = 0; q < psi.n; ++q)
    if (bits[q]) index |= std::size_t{1} << q;
  psi.amp[index] = 1.0;
  return psi;
}

StateVector haar_random_state(int n, std::mt19937_64& rng) {
  StateVector psi;
  psi.n = n;
  psi.amp.resize(std::size_t{1} << n);
  std::normal_distribution<double> normal;
  for (auto& a : psi.amp) a = {normal(rng), normal(rng)};
  const double nrm = psi.norm();
  for (auto& a : psi.amp) a /= nrm;
  return psi;
}

void apply_gate(StateVector& psi, const Gate& gate) {
  // exp(i t P) = cos t + i sin t P for P^2 = I.
  std::vector<cplx> flipped = psi.amp;
  apply_pauli(flipped, gate.j, gate.pj);
  apply_pauli(flipped, gate.i, gate.pi);
  const double c = std::cos(gate.theta);
  const cplx is = kI * std::sin(gate.theta);
  for (std::size_t b = 0; b < psi.amp.size(); ++b) psi.amp[b] = c * psi.amp[b] + is * flipped[b];
}

StateVector simulate(const Circuit& circuit, int limit) {
  check_qubits(circuit.n, limit, "simulate");
  StateVector psi = basis_state(circuit.initial);
  for (const auto& gate : circuit.gates) apply_gate(psi, gate);
  return psi;
}

PauliCorrelations pair_correlations(const StateVector& psi, int i, int j) {
  const std::size_t mi = std::size_t{1} << i;
  const std::size_t mj = std::size_t{1} << j;
  double xx = 0, yy = 0, zz = 0;
  for (std::size_t b = 0; b < psi.amp.size(); ++b) {
    const double p = std::norm(psi.amp[b]);
    const bool bi = b & mi, bj = b & mj;
    zz += (bi == bj) ? p : -p;
    // <psi| XX |psi> = sum_b conj(psi[b]) psi[b ^ mi ^ mj]
    const cplx cross = std::conj(psi.amp[b]) * psi.amp[b ^ mi ^ mj];
    xx += cross.real();
    // Y_i Y_j |b> = phase_i phase_j |b ^ mi ^ mj>; equal bits give -1, unequal +1.
    yy += (bi == bj) ? -cross.real() : cross.real();
  }
  return {xx, yy, zz};
}

double expectation(const StateVector& psi, const Graph& g) {
  double total = 0;
  for (const auto& e : g.edges()) total += e.w * pair_correlations(psi, e.i, e.j).four_h() / 4;
  return total;
}

SpectrumResult exact_opt(const Graph& g, int limit) {
  const int n = g.num_vertices();
  check_qubits(n, limit, "exact_opt");
  SpectrumResult best;
  const std::size_t states = std::size_t{1} << n;
  std::vector<std::size_t> position(states);
  for (int weight = 0; weight <= n; ++weight) {
    std::vector<std::size_t> basis;
    for (std::size_t b = 0; b < states; ++b)
      if (std::popcount(b) == weight) {
        position[b] = basis.size();
        basis.push_back(b);
      }
    // H_ij kills |00>, |11> and maps |01> -> (|01> - |10>)/2.
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis.size(), basis.size());
    for (std::size_t r = 0; r < basis.size(); ++r) {
      const std::size_t b = basis[r];
      for (const auto& e : g.edges()) {
        const std::size_t mi = std::size_t{1} << e.i, mj = std::size_t{1} << e.j;
        if (static_cast<bool>(b & mi) == static_cast<bool>(b & mj)) continue;
        h(r, r) += e.w / 2;
        h(position[b ^ mi ^ mj], r) -= e.w / 2;
      }
    }
    double top = 0.0;
    if (basis.size() == 1) {
      top = h(0, 0);
    } else if (basis.size() == 2) {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig;
      eig.computeDirect(Eigen::Matrix2d(h), Eigen::EigenvaluesOnly);
      top = eig.eigenvalues().maxCoeff();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h, Eigen::EigenvaluesOnly);
      top = eig.eigenvalues().maxCoeff();
    }
    if (weight == 0 || top > best.lambda_max) best = {top, weight, basis.size()};
  }
  return best;
}

Eigen::MatrixXd moment_matrix_from_state(const StateVector& psi, const GramIndex& index) {
  if (psi.n != index.num_vertices()) throw InputError("state and index sizes differ");
  const int size = index.size();
  // Column k holds Op_k |psi>; M = Re(W^H W) since every Op_k is Hermitian.
  Eigen::MatrixXcd w(static_cast<Eigen::Index>(psi.amp.size()), size);
  for (int k = 0; k < size; ++k) {
    std::vector<cplx> v = psi.amp;
    const GramLabel label = index.label(k);
    if (label.kind != GramLabel::Kind::Unit) apply_pauli(v, label.i, label.a);
    if (label.kind == GramLabel::Kind::Pair) apply_pauli(v, label.j, label.a);
    for (std::size_t b = 0; b < v.size(); ++b) w(static_cast<Eigen::Index>(b), k) = v[b];
  }
  return (w.adjoint() * w).real();
}

}  // namespace qmc
