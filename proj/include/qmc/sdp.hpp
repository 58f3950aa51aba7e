#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qmc/graph.hpp"

namespace qmc {

/// Single-qubit Pauli letter. The numeric value is the SDP basis index a.
enum class Pauli : int { X = 1, Y = 2, Z = 3 };

inline constexpr Pauli kPaulis[] = {Pauli::X, Pauli::Y, Pauli::Z};

char pauli_letter(Pauli p);

/// A row of the Gram matrix: the identity, a single-qubit Pauli P_i, or a
/// same-letter two-qubit product P_i P_j (i < j).
struct GramLabel {
  enum class Kind { Unit, Single, Pair };
  Kind kind = Kind::Unit;
  int i = -1;
  int j = -1;
  Pauli a = Pauli::X;

  std::string name() const;  // "I", "X3", "Z0Z4"
  friend bool operator==(const GramLabel&, const GramLabel&) = default;
};

/// Ordering: Unit, then Single(i, a) lexicographic in (i, a), then
/// Pair({i, j}, a) lexicographic in (i, j, a). Size 1 + 3n + 3n(n-1)/2.
class GramIndex {
 public:
  GramIndex() = default;
  explicit GramIndex(int n);

  int num_vertices() const { return n_; }
  int size() const { return 1 + 3 * n_ + 3 * num_pairs(); }
  int num_pairs() const { return n_ * (n_ - 1) / 2; }

  static constexpr int unit() { return 0; }
  int single(int i, Pauli a) const { return 1 + 3 * i + (static_cast<int>(a) - 1); }
  /// Order-insensitive in (i, j).
  int pair(int i, int j, Pauli a) const {
    return 1 + 3 * n_ + 3 * pair_rank(i, j) + (static_cast<int>(a) - 1);
  }
  int pair_rank(int i, int j) const;

  GramLabel label(int row) const;
  std::vector<GramLabel> labels() const;

 private:
  int n_ = 0;
};

/// Constraint families of the relaxation, one per defining equation.
enum class ConstraintFamily {
  UnitNorm,          // |v0|^2 = 1
  SingleNorm,        // |v_{i,a}|^2 = 1
  SingleOrthogonal,  // v_{i,a} . v_{i,b} = 0, a < b
  PairNorm,          // |v_{ij,a}|^2 = 1
  SingleProduct,     // v_{i,a} . v_{j,a} = v_{ij,a} . v0
  PairChain,         // v_{ij,a} . v_{jk,a} = v_{ik,a} . v0
  PairCross,         // v_{ij,a} . v_{jk,b} = 0, a != b
  PairAnticommute,   // v_{ij,a} . v_{ij,b} = -v_{ij,c} . v0
};

inline constexpr int kNumConstraintFamilies = 8;
std::string to_string(ConstraintFamily f);

/// One entry of a linear functional on a symmetric matrix: coeff * M(row, col)
/// with row <= col. Off-diagonal entries are counted once.
struct MatrixTerm {
  int row;
  int col;
  double coeff;
};

struct LinearConstraint {
  std::vector<MatrixTerm> terms;
  double rhs = 0.0;
  ConstraintFamily family = ConstraintFamily::UnitNorm;

  double evaluate(const Eigen::MatrixXd& m) const;
};

/// Linear objective and equality constraints over a single Gram matrix.
struct SdpModel {
  GramIndex index;
  std::vector<MatrixTerm> objective;
  std::vector<LinearConstraint> constraints;

  double objective_value(const Eigen::MatrixXd& m) const;
  double max_residual(const Eigen::MatrixXd& m) const;
  std::size_t count(ConstraintFamily f) const;

  /// Dense symmetric objective matrix C with <C, M>_F = objective_value(M).
  Eigen::MatrixXd objective_matrix() const;

  /// Labels plus constraint triplets (row, col, coeff) with rhs and family tag.
  nlohmann::json to_json() const;
};

/// Emits every constraint family over all vertex pairs and triples, not
/// only edges. Objective: sum over edges of (w/4)(M[0,0] - sum_a M[Pair(ij,a), 0]).
SdpModel build_model(const Graph& g);

struct SolverConfig {
  double tol_feas = 1e-6;
  double tol_psd = 1e-8;
  double tol_extract = 1e-6;
  int max_iterations = 20000;
  double rho = 1.0;         // initial penalty
  double relaxation = 1.6;  // over-relaxation factor in (0, 2)
  bool adapt_rho = true;
  int anderson_memory = 10;  // 0 disables acceleration
  std::uint64_t seed = 0;   // the solver starts from the identity; kept for reproducible reruns

  void validate() const;
};

struct GramResiduals {
  double max_constraint_residual = 0.0;
  double min_eigenvalue = 0.0;
  double primal_residual = 0.0;  // |X - Z| between affine and PSD iterates
  double dual_residual = 0.0;
  double duality_gap = 0.0;      // dual bound minus primal objective
  int iterations = 0;
  bool converged = false;

  nlohmann::json to_json() const;
};

struct GramSolution {
  Eigen::MatrixXd gram;
  double objective = 0.0;
  double dual_bound = 0.0;
  GramResiduals residuals;
};

/// Thrown by solve() when the iteration budget runs out before the
/// tolerances are met. Carries the residuals of the last iterate.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, GramResiduals r)
      : std::runtime_error(what), residuals(r) {}
  GramResiduals residuals;
};

/// ADMM between the affine constraint set and the PSD cone. The returned
/// matrix is the PSD iterate; deterministic for a given model and config.
GramSolution solve(const SdpModel& model, const SolverConfig& cfg);

/// One real vector per Gram label; rows of `vectors`.
struct VectorSolution {
  GramIndex index;
  Eigen::MatrixXd vectors;  // size() x dim
  GramResiduals residuals;
  double reconstruction_error = 0.0;  // max |v_k . v_l - M(k, l)| before normalization
  double max_norm_deviation = 0.0;    // max ||v_k| - 1| before normalization
  double objective = 0.0;             // copied from the Gram solution

  int dim() const { return static_cast<int>(vectors.cols()); }
  Eigen::VectorXd unit() const { return vectors.row(0).transpose(); }
  Eigen::VectorXd single(int i, Pauli a) const { return vectors.row(index.single(i, a)).transpose(); }
  Eigen::VectorXd pair(int i, int j, Pauli a) const { return vectors.row(index.pair(i, j, a)).transpose(); }
  /// v_ij = v_{ij,1} + v_{ij,2} + v_{ij,3}.
  Eigen::VectorXd pair_sum(int i, int j) const;
  /// v_ij . v0
  double pair_overlap(int i, int j) const;
};

/// Eigendecomposition M = Q diag(lambda) Q^T; eigenvalues in [-tol_psd, 0)
/// are clamped to zero and v_k = (sqrt(lambda_m) Q(k, m))_m. All labels are
/// unit-norm in the relaxation and are re-normalized afterwards.
/// Throws NumericalError if an eigenvalue is below -tol_psd.
VectorSolution extract_vectors(const GramSolution& sol, const SolverConfig& cfg);

/// Sum over objective terms evaluated on vector dot products.
double objective_value(const SdpModel& model, const VectorSolution& vs);

/// Residuals of the pair-vector identities that every feasible point obeys:
/// |v_ij|^2 = 3 - 2 v_ij.v0, |v0 + v_ij|^2 = 4, v_ij.v_jk = v_ik.v0.
struct PairIdentityReport {
  double norm_error = 0.0;
  double sphere_error = 0.0;
  double chain_error = 0.0;
  double min_overlap = 0.0;  // min over pairs of v_ij.v0
  double max_overlap = 0.0;

  double worst() const;
};

PairIdentityReport check_pair_identities(const VectorSolution& vs);

}  // namespace qmc
