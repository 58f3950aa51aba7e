#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qmc/graph.hpp"
#include "qmc/rounding.hpp"
#include "qmc/sdp.hpp"

namespace qmc {

inline constexpr int kDefaultSimLimit = 16;
inline constexpr int kDefaultDiagLimit = 16;

/// Little-endian: bit i of a basis index is the value of qubit i, and qubit
/// i of a bit string z is z[i].
struct StateVector {
  int n = 0;
  std::vector<std::complex<double>> amp;

  double norm() const;
  /// |<this|other>|; 1 means equal up to global phase.
  double overlap(const StateVector& other) const;
};

StateVector basis_state(const std::vector<std::uint8_t>& bits);
StateVector haar_random_state(int n, std::mt19937_64& rng);

/// In-place exp(i theta P_i P_j) for P in {X, Y, Z}.
void apply_gate(StateVector& psi, const Gate& gate);

/// U(theta)|z>. Throws InputError if circuit.n > limit.
StateVector simulate(const Circuit& circuit, int limit = kDefaultSimLimit);

struct PauliCorrelations {
  double xx;
  double yy;
  double zz;

  /// <4 H_ij> = 1 - xx - yy - zz
  double four_h() const { return 1.0 - xx - yy - zz; }
};

PauliCorrelations pair_correlations(const StateVector& psi, int i, int j);

/// sum over edges of w_ij <psi|H_ij|psi>, H_ij = (I - XX - YY - ZZ)/4.
double expectation(const StateVector& psi, const Graph& g);

struct SpectrumResult {
  double lambda_max = 0.0;
  int sector = 0;                   // Hamming weight of the maximizing sector
  std::size_t sector_dimension = 0;
};

/// lambda_max(H) by dense diagonalization of each Hamming-weight sector.
/// Throws InputError if n > limit.
SpectrumResult exact_opt(const Graph& g, int limit = kDefaultDiagLimit);

/// M(Phi, Psi) = Re <psi| Phi Psi |psi> over the labels of `index`.
Eigen::MatrixXd moment_matrix_from_state(const StateVector& psi, const GramIndex& index);

}  // namespace qmc
