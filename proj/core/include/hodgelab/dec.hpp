#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "hodgelab/mesh.hpp"

namespace hodgelab {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Discrete p-form: one value per p-simplex in canonical order.
struct Cochain {
  int degree = 0;
  Vector values;
};

/// Index space of an operator: degree of the cochains and whether essential
/// boundary rows/columns were removed.
struct IndexSpace {
  int degree = 0;
  bool constrained = false;
};

struct OperatorMatrix {
  SparseMatrix matrix;
  IndexSpace rows;
  IndexSpace cols;
};

/// Signed incidence D_p : C^p -> C^{p+1}; entries in {-1, 0, +1}.
OperatorMatrix coboundary_matrix(const SimplicialComplex& complex, int p);

/// Lowest-order Whitney mass matrix for p-forms, integrated exactly with the
/// barycentric monomial formula. Throws AssemblyError on a degenerate cell.
OperatorMatrix mass_matrix(const SimplicialComplex& complex, int p);

/// Sparse Cholesky factorization shared between operators.
using SparseCholesky = Eigen::SimplicialLLT<SparseMatrix>;
std::shared_ptr<const SparseCholesky> factorize_spd(const SparseMatrix& m, const std::string& what);

/// delta_h = M_{p-1}^{-1} D_{p-1}^T M_p, the exact M-adjoint of D_{p-1}.
/// For p = 0 it maps into the empty space.
class DiscreteCodifferential {
 public:
  DiscreteCodifferential(const SimplicialComplex& complex, int p);

  int degree() const { return p_; }
  Vector apply(const Vector& b) const;

  const SparseMatrix& coboundary() const { return d_prev_; }   // D_{p-1}
  const SparseMatrix& mass() const { return mass_; }           // M_p
  const SparseMatrix& lower_mass() const { return mass_prev_; }  // M_{p-1}

 private:
  int p_;
  SparseMatrix d_prev_;
  SparseMatrix mass_;
  SparseMatrix mass_prev_;
  std::shared_ptr<const SparseCholesky> mass_prev_solver_;
};

struct HodgeSplit {
  Cochain closed;
  Cochain coexact;
  int iterations = 0;
  double residual = 0.0;
};

/// Splits p-cochains into a closed part (D_p u = 0) and a co-exact part
/// delta_h w, M_p-orthogonal to each other. The potential solve runs
/// conjugate gradients on D_p M_p^{-1} D_p^T with relative tolerance 1e-10 and
/// at most 10 * ndof iterations.
class HodgeProjector {
 public:
  HodgeProjector(const SimplicialComplex& complex, int p);

  int degree() const { return p_; }
  HodgeSplit split(const Cochain& u) const;

  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& coboundary() const { return d_; }

 private:
  int p_;
  SparseMatrix d_;     // D_p
  SparseMatrix mass_;  // M_p
  std::shared_ptr<const SparseCholesky> mass_solver_;
};

HodgeSplit hodge_split(const SimplicialComplex& complex, int p, const Cochain& u);

/// Exact rank over Q by fraction-free elimination on integer entries.
int exact_rank(const SparseMatrix& integer_matrix);

/// b_p = dim ker D_p - rank D_{p-1}, via exact ranks. Intended for small meshes.
std::vector<int> betti_numbers(const SimplicialComplex& complex);

/// Matrix Market coordinate format, general real.
void write_matrix_market(const SparseMatrix& m, const std::string& path);

}  // namespace hodgelab
