#include "qmc/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "qmc/errors.hpp"

namespace qmc {

char pauli_letter(Pauli p) {
  switch (p) {
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

std::string GramLabel::name() const {
  switch (kind) {
    case Kind::Unit: return "I";
    case Kind::Single: return pauli_letter(a) + std::to_string(i);
    case Kind::Pair:
      return pauli_letter(a) + std::to_string(i) + pauli_letter(a) + std::to_string(j);
  }
  return "?";
}

GramIndex::GramIndex(int n) : n_(n) {
  if (n < 1) throw InputError("Gram index needs at least one vertex");
}

int GramIndex::pair_rank(int i, int j) const {
  if (i > j) std::swap(i, j);
  return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
}

GramLabel GramIndex::label(int row) const {
  if (row == 0) return {};
  if (row <= 3 * n_) {
    int k = row - 1;
    return {GramLabel::Kind::Single, k / 3, -1, static_cast<Pauli>(k % 3 + 1)};
  }
  int k = row - 1 - 3 * n_;
  int rank = k / 3;
  auto a = static_cast<Pauli>(k % 3 + 1);
  int i = 0;
  while (rank >= n_ - i - 1) {
    rank -= n_ - i - 1;
    ++i;
  }
  return {GramLabel::Kind::Pair, i, i + 1 + rank, a};
}

std::vector<GramLabel> GramIndex::labels() const {
  std::vector<GramLabel> out;
  out.reserve(size());
  for (int r = 0; r < size(); ++r) out.push_back(label(r));
  return out;
}

std::string to_string(ConstraintFamily f) {
  switch (f) {
    case ConstraintFamily::UnitNorm: return "unit_norm";
    case ConstraintFamily::SingleNorm: return "single_norm";
    case ConstraintFamily::SingleOrthogonal: return "single_orthogonal";
    case ConstraintFamily::PairNorm: return "pair_norm";
    case ConstraintFamily::SingleProduct: return "single_product";
    case ConstraintFamily::PairChain: return "pair_chain";
    case ConstraintFamily::PairCross: return "pair_cross";
    case ConstraintFamily::PairAnticommute: return "pair_anticommute";
  }
  return "?";
}

double LinearConstraint::evaluate(const Eigen::MatrixXd& m) const {
  double v = 0;
  for (const auto& t : terms) v += t.coeff * m(t.row, t.col);
  return v;
}

double SdpModel::objective_value(const Eigen::MatrixXd& m) const {
  double v = 0;
  for (const auto& t : objective) v += t.coeff * m(t.row, t.col);
  return v;
}

double SdpModel::max_residual(const Eigen::MatrixXd& m) const {
  double worst = 0;
  for (const auto& c : constraints) worst = std::max(worst, std::abs(c.evaluate(m) - c.rhs));
  return worst;
}

std::size_t SdpModel::count(ConstraintFamily f) const {
  return static_cast<std::size_t>(std::count_if(
      constraints.begin(), constraints.end(), [f](const auto& c) { return c.family == f; }));
}

Eigen::MatrixXd SdpModel::objective_matrix() const {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(index.size(), index.size());
  for (const auto& t : objective) {
    if (t.row == t.col) {
      c(t.row, t.col) += t.coeff;
    } else {
      c(t.row, t.col) += 0.5 * t.coeff;
      c(t.col, t.row) += 0.5 * t.coeff;
    }
  }
  return c;
}

nlohmann::json SdpModel::to_json() const {
  nlohmann::json doc;
  doc["n"] = index.num_vertices();
  doc["size"] = index.size();
  auto& labels = doc["labels"] = nlohmann::json::array();
  for (const auto& l : index.labels()) labels.push_back(l.name());
  auto& obj = doc["objective"] = nlohmann::json::array();
  for (const auto& t : objective) obj.push_back({t.row, t.col, t.coeff});
  auto& cons = doc["constraints"] = nlohmann::json::array();
  for (const auto& c : constraints) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : c.terms) terms.push_back({t.row, t.col, t.coeff});
    cons.push_back({{"terms", terms}, {"rhs", c.rhs}, {"family", to_string(c.family)}});
  }
  return doc;
}

namespace {

MatrixTerm term(int r, int c, double coeff) {
  if (r > c) std::swap(r, c);
  return {r, c, coeff};
}

}  // namespace

SdpModel build_model(const Graph& g) {
  const int n = g.num_vertices();
  SdpModel model{GramIndex(n), {}, {}};
  const GramIndex& idx = model.index;
  auto& cons = model.constraints;
  auto add = [&](ConstraintFamily f, double rhs, std::vector<MatrixTerm> terms) {
    cons.push_back({std::move(terms), rhs, f});
  };

  add(ConstraintFamily::UnitNorm, 1.0, {term(0, 0, 1.0)});
  for (int i = 0; i < n; ++i)
    for (Pauli a : kPaulis) {
      int s = idx.single(i, a);
      add(ConstraintFamily::SingleNorm, 1.0, {term(s, s, 1.0)});
    }
  for (int i = 0; i < n; ++i)
    for (int a = 1; a <= 3; ++a)
      for (int b = a + 1; b <= 3; ++b)
        add(ConstraintFamily::SingleOrthogonal, 0.0,
            {term(idx.single(i, Pauli(a)), idx.single(i, Pauli(b)), 1.0)});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (Pauli a : kPaulis) {
        int p = idx.pair(i, j, a);
        add(ConstraintFamily::PairNorm, 1.0, {term(p, p, 1.0)});
      }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (Pauli a : kPaulis)
        add(ConstraintFamily::SingleProduct, 0.0,
            {term(idx.single(i, a), idx.single(j, a), 1.0), term(0, idx.pair(i, j, a), -1.0)});

  // For each unordered triple, each vertex in turn is the shared (pivot)
  // vertex of the two pair vectors.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const int triple[3] = {i, j, k};
        for (int pivot = 0; pivot < 3; ++pivot) {
          int m = triple[pivot];
          int x = triple[(pivot + 1) % 3];
          int y = triple[(pivot + 2) % 3];
          for (Pauli a : kPaulis)
            add(ConstraintFamily::PairChain, 0.0,
                {term(idx.pair(x, m, a), idx.pair(m, y, a), 1.0), term(0, idx.pair(x, y, a), -1.0)});
          for (Pauli a : kPaulis)
            for (Pauli b : kPaulis)
              if (a != b)
                add(ConstraintFamily::PairCross, 0.0, {term(idx.pair(x, m, a), idx.pair(m, y, b), 1.0)});
        }
      }

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int a = 1; a <= 3; ++a)
        for (int b = a + 1; b <= 3; ++b) {
          int c = 6 - a - b;
          add(ConstraintFamily::PairAnticommute, 0.0,
              {term(idx.pair(i, j, Pauli(a)), idx.pair(i, j, Pauli(b)), 1.0),
               term(0, idx.pair(i, j, Pauli(c)), 1.0)});
        }

  for (const auto& e : g.edges()) {
    if (e.w == 0.0) continue;
    model.objective.push_back(term(0, 0, e.w / 4));
    for (Pauli a : kPaulis) model.objective.push_back(term(0, idx.pair(e.i, e.j, a), -e.w / 4));
  }
  return model;
}

void SolverConfig::validate() const {
  if (!(tol_feas > 0 && tol_psd > 0 && tol_extract > 0)) throw InputError("solver tolerances must be positive");
  if (max_iterations < 1) throw InputError("solver needs max_iterations >= 1");
  if (anderson_memory < 0) throw InputError("anderson_memory must be >= 0");
  if (!(rho > 0)) throw InputError("solver penalty must be positive");
  if (!(relaxation > 0 && relaxation < 2)) throw InputError("over-relaxation must lie in (0, 2)");
}

nlohmann::json GramResiduals::to_json() const {
  return {{"max_constraint_residual", max_constraint_residual},
          {"min_eigenvalue", min_eigenvalue},
          {"primal_residual", primal_residual},
          {"dual_residual", dual_residual},
          {"duality_gap", duality_gap},
          {"iterations", iterations},
          {"converged", converged}};
}

namespace {

// Isometric vectorization of the upper triangle (off-diagonals scaled by
// sqrt 2), so Euclidean geometry on vectors is Frobenius geometry on matrices.
class SymmetricVectorizer {
 public:
  explicit SymmetricVectorizer(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  Eigen::Index length() const { return static_cast<Eigen::Index>(dim_) * (dim_ + 1) / 2; }
  Eigen::Index position(int r, int c) const {
    if (r > c) std::swap(r, c);
    return static_cast<Eigen::Index>(c) * (c + 1) / 2 + r;
  }
  static double scale(int r, int c) { return r == c ? 1.0 : std::sqrt(2.0); }

  Eigen::VectorXd pack(const Eigen::MatrixXd& m) const {
    Eigen::VectorXd v(length());
    Eigen::Index k = 0;
    for (int c = 0; c < dim_; ++c)
      for (int r = 0; r <= c; ++r) v[k++] = m(r, c) * scale(r, c);
    return v;
  }

  Eigen::MatrixXd unpack(const Eigen::VectorXd& v) const {
    Eigen::MatrixXd m(dim_, dim_);
    Eigen::Index k = 0;
    for (int c = 0; c < dim_; ++c)
      for (int r = 0; r <= c; ++r) {
        double x = v[k++] / scale(r, c);
        m(r, c) = x;
        m(c, r) = x;
      }
    return m;
  }

 private:
  int dim_;
};

struct PsdProjection {
  Eigen::MatrixXd projected;
  double min_eigenvalue;
};

PsdProjection project_psd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  const auto& q = eig.eigenvectors();
  return {q * lambda.asDiagonal() * q.transpose(), eig.eigenvalues().minCoeff()};
}

class AffineProjector {
 public:
  AffineProjector(const SdpModel& model, const SymmetricVectorizer& vec)
      : a_(static_cast<Eigen::Index>(model.constraints.size()), vec.length()),
        b_(static_cast<Eigen::Index>(model.constraints.size())) {
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t l = 0; l < model.constraints.size(); ++l) {
      const auto& con = model.constraints[l];
      for (const auto& t : con.terms) {
        triplets.emplace_back(static_cast<int>(l), static_cast<int>(vec.position(t.row, t.col)),
                              t.coeff / SymmetricVectorizer::scale(t.row, t.col));
      }
      b_[static_cast<Eigen::Index>(l)] = con.rhs;
    }
    a_.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SparseMatrix<double> gram = a_ * a_.transpose();
    ldlt_.compute(gram);
    if (ldlt_.info() != Eigen::Success) throw NumericalError("constraint system is rank deficient");
  }

  Eigen::VectorXd project(const Eigen::VectorXd& y) const {
    Eigen::VectorXd r = a_ * y - b_;
    return y - a_.transpose() * ldlt_.solve(r);
  }

  double max_residual(const Eigen::VectorXd& x) const {
    return (a_ * x - b_).cwiseAbs().maxCoeff();
  }

  /// Least-squares multipliers y minimizing |A^T y - s|.
  Eigen::VectorXd multipliers(const Eigen::VectorXd& s) const { return ldlt_.solve(a_ * s); }

  const Eigen::SparseMatrix<double>& a() const { return a_; }
  const Eigen::VectorXd& b() const { return b_; }

 private:
  Eigen::SparseMatrix<double> a_;
  Eigen::VectorXd b_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

// Type-II Anderson acceleration over the ADMM fixed-point map w -> T(w),
// fed with images T(w_k) and steps T(w_k) - w_k.
class AndersonHistory {
 public:
  explicit AndersonHistory(int memory) : memory_(memory) {}

  void clear() {
    images_.clear();
    steps_.clear();
  }

  void push(const Eigen::VectorXd& image, const Eigen::VectorXd& step) {
    if (memory_ <= 0) return;
    images_.push_back(image);
    steps_.push_back(step);
    if (static_cast<int>(images_.size()) > memory_ + 1) {
      images_.pop_front();
      steps_.pop_front();
    }
  }

  bool extrapolate(Eigen::VectorXd& out) const {
    const int m = static_cast<int>(images_.size()) - 1;
    if (m < 1) return false;
    const Eigen::Index len = images_.back().size();
    Eigen::MatrixXd dg(len, m), df(len, m);
    for (int k = 0; k < m; ++k) {
      dg.col(k) = steps_[k + 1] - steps_[k];
      df.col(k) = images_[k + 1] - images_[k];
    }
    Eigen::MatrixXd normal = dg.transpose() * dg;
    normal.diagonal().array() += 1e-10 * std::max(1e-30, normal.trace());
    Eigen::VectorXd weights = normal.ldlt().solve(dg.transpose() * steps_.back());
    if (!weights.allFinite()) return false;
    out = images_.back() - df * weights;
    return true;
  }

 private:
  int memory_;
  std::deque<Eigen::VectorXd> images_;
  std::deque<Eigen::VectorXd> steps_;
};

// Every feasible Gram matrix has unit diagonal, so trace = dim. For any
// multipliers y with slack S = A^T y - C, <C, X> = b.y - <S, X> <= b.y +
// max(0, -lambda_min(S)) * dim: a valid upper bound on the optimum.
double dual_bound(const AffineProjector& aff, const SymmetricVectorizer& vec,
                  const Eigen::VectorXd& c, const Eigen::VectorXd& slack) {
  Eigen::VectorXd y = aff.multipliers(c + slack);
  Eigen::VectorXd s = aff.a().transpose() * y - c;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(vec.unpack(s), Eigen::EigenvaluesOnly);
  double lambda_min = eig.eigenvalues().minCoeff();
  return aff.b().dot(y) + std::max(0.0, -lambda_min) * vec.dim();
}

}  // namespace

GramSolution solve(const SdpModel& model, const SolverConfig& cfg) {
  cfg.validate();
  const int dim = model.index.size();
  SymmetricVectorizer vec(dim);
  AffineProjector aff(model, vec);
  const Eigen::VectorXd c = vec.pack(model.objective_matrix());

  // The identity is feasible: all labels orthonormal.
  Eigen::VectorXd z = vec.pack(Eigen::MatrixXd::Identity(dim, dim));
  Eigen::VectorXd u = Eigen::VectorXd::Zero(vec.length());
  Eigen::VectorXd z_out = z;  // last PSD iterate
  double rho = cfg.rho;

  const double feas_target = 1e-2 * cfg.tol_feas;
  constexpr int kCheckEvery = 10;
  constexpr int kAdaptEvery = 100;

  const Eigen::Index len = vec.length();
  AndersonHistory anderson(cfg.anderson_memory);
  Eigen::VectorXd fallback(2 * len);  // plain ADMM image of the last extrapolated point's base
  double fallback_norm = 0.0;
  bool extrapolated = false;

  GramResiduals res;
  double best_bound = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    Eigen::VectorXd x = aff.project(z - u + c / rho);
    Eigen::VectorXd x_relaxed = cfg.relaxation * x + (1.0 - cfg.relaxation) * z;
    Eigen::VectorXd z_next = vec.pack(project_psd(vec.unpack(x_relaxed + u)).projected);
    Eigen::VectorXd u_next = u + x_relaxed - z_next;

    Eigen::VectorXd image(2 * len), step(2 * len);
    image << z_next, u_next;
    step.head(len) = z_next - z;
    step.tail(len) = u_next - u;
    const double step_norm = step.norm();

    res.iterations = it;
    res.primal_residual = (x - z_next).norm();
    res.dual_residual = rho * step.head(len).norm();
    z_out = z_next;

    if (extrapolated && step_norm > fallback_norm) {
      // The extrapolated point did worse than the plain step it replaced.
      z = fallback.head(len);
      u = fallback.tail(len);
      anderson.clear();
      extrapolated = false;
    } else {
      anderson.push(image, step);
      Eigen::VectorXd next;
      if (anderson.extrapolate(next)) {
        fallback = image;
        fallback_norm = step_norm;
        extrapolated = true;
      } else {
        next = image;
        extrapolated = false;
      }
      z = next.head(len);
      u = next.tail(len);
    }

    if (it % kCheckEvery != 0 && it != cfg.max_iterations) continue;

    res.max_constraint_residual = aff.max_residual(z_out);
    if (res.max_constraint_residual <= feas_target) {
      // Dual slack estimate from the scaled multiplier of X = Z. The bound
      // holds for any multipliers, so a small gap certifies the iterate.
      best_bound = std::min(best_bound, dual_bound(aff, vec, c, -rho * u_next));
      const double obj = c.dot(z_out);
      res.duality_gap = best_bound - obj;
      if (std::abs(res.duality_gap) <= cfg.tol_feas * std::max(1.0, std::abs(obj))) {
        res.converged = true;
        break;
      }
    }

    // Residual balancing: move rho toward the point where the primal and
    // dual residuals shrink together.
    if (cfg.adapt_rho && it % kAdaptEvery == 0 && res.dual_residual > 0 && res.primal_residual > 0) {
      double ratio = res.primal_residual / res.dual_residual;
      if (ratio > 2.0 || ratio < 0.5) {
        double factor = std::clamp(std::sqrt(ratio), 0.2, 5.0);
        rho *= factor;
        z = z_out;
        u = u_next / factor;
        anderson.clear();
        extrapolated = false;
      }
    }
  }
  z = z_out;

  GramSolution sol;
  sol.gram = vec.unpack(z);
  sol.objective = model.objective_value(sol.gram);
  sol.dual_bound = best_bound;
  res.max_constraint_residual = model.max_residual(sol.gram);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sol.gram, Eigen::EigenvaluesOnly);
  res.min_eigenvalue = eig.eigenvalues().minCoeff();
  sol.residuals = res;
  if (!res.converged || res.max_constraint_residual > cfg.tol_feas || res.min_eigenvalue < -cfg.tol_psd) {
    throw SolverFailure("SDP solver did not converge within " + std::to_string(cfg.max_iterations) +
                            " iterations",
                        res);
  }
  return sol;
}

Eigen::VectorXd VectorSolution::pair_sum(int i, int j) const {
  return (vectors.row(index.pair(i, j, Pauli::X)) + vectors.row(index.pair(i, j, Pauli::Y)) +
          vectors.row(index.pair(i, j, Pauli::Z)))
      .transpose();
}

double VectorSolution::pair_overlap(int i, int j) const {
  return pair_sum(i, j).dot(vectors.row(0).transpose());
}

VectorSolution extract_vectors(const GramSolution& sol, const SolverConfig& cfg) {
  const Eigen::MatrixXd& m = sol.gram;
  const int dim = static_cast<int>(m.rows());
  int n = 0;
  while (1 + 3 * (n + 1) + 3 * (n + 1) * n / 2 <= dim) ++n;
  if (n < 1 || GramIndex(n).size() != dim) throw NumericalError("Gram matrix size does not match any vertex count");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  Eigen::VectorXd lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -cfg.tol_psd) {
    throw NumericalError("Gram matrix is not PSD to tolerance (min eigenvalue " +
                         std::to_string(lambda.minCoeff()) + ")");
  }
  lambda = lambda.cwiseMax(0.0);

  VectorSolution vs;
  vs.index = GramIndex(n);
  vs.residuals = sol.residuals;
  vs.objective = sol.objective;
  vs.vectors = eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
  vs.reconstruction_error = (vs.vectors * vs.vectors.transpose() - m).cwiseAbs().maxCoeff();
  Eigen::VectorXd norms = vs.vectors.rowwise().norm();
  vs.max_norm_deviation = (norms.array() - 1.0).abs().maxCoeff();
  for (int k = 0; k < dim; ++k) {
    if (norms[k] <= 0) throw NumericalError("zero vector for label " + vs.index.label(k).name());
    vs.vectors.row(k) /= norms[k];
  }
  return vs;
}

double objective_value(const SdpModel& model, const VectorSolution& vs) {
  double v = 0;
  for (const auto& t : model.objective) v += t.coeff * vs.vectors.row(t.row).dot(vs.vectors.row(t.col));
  return v;
}

double PairIdentityReport::worst() const { return std::max({norm_error, sphere_error, chain_error}); }

PairIdentityReport check_pair_identities(const VectorSolution& vs) {
  PairIdentityReport rep;
  const int n = vs.index.num_vertices();
  const int pairs = vs.index.num_pairs();
  if (pairs == 0) return rep;
  Eigen::MatrixXd sums(pairs, vs.dim());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) sums.row(vs.index.pair_rank(i, j)) = vs.pair_sum(i, j).transpose();
  const Eigen::VectorXd v0 = vs.unit();
  const Eigen::MatrixXd dots = sums * sums.transpose();
  const Eigen::VectorXd overlap = sums * v0;

  rep.min_overlap = overlap.minCoeff();
  rep.max_overlap = overlap.maxCoeff();
  for (int p = 0; p < pairs; ++p) {
    rep.norm_error = std::max(rep.norm_error, std::abs(dots(p, p) - (3 - 2 * overlap[p])));
    rep.sphere_error = std::max(rep.sphere_error, std::abs((v0 + sums.row(p).transpose()).squaredNorm() - 4));
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k) {
        if (i == j || k == j) continue;
        double lhs = dots(vs.index.pair_rank(i, j), vs.index.pair_rank(j, k));
        rep.chain_error = std::max(rep.chain_error, std::abs(lhs - overlap[vs.index.pair_rank(i, k)]));
      }
  return rep;
}

}  // namespace qmc
