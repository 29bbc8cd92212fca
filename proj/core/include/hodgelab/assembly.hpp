#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hodgelab/dec.hpp"
#include "hodgelab/mesh.hpp"

namespace hodgelab {

enum class BCKind { ScalarDirichlet, ScalarNeumann, Absolute, TrueDirichlet, CurlCurlRelative };

std::string to_string(BCKind bc);
BCKind parse_bc(const std::string& name);

/// Which entries of the full cochain space survive essential constraints.
struct DofMap {
  int full_size = 0;
  std::vector<int> kept;   // kept[i] = full index of dof i
  int components = 1;      // >1 for componentwise vector problems
  std::string description;

  bool identity() const { return components == 1 && static_cast<int>(kept.size()) == full_size; }
  /// Scatters a dof vector into the full space (one component block each).
  Vector expand(const Vector& dofs) const;
};

struct ProblemMeta {
  std::string domain;
  int dim = 0;
  double h = 0.0;
};

/// Extra term C M_aux^{-1} C^T of the mixed (Schur-reduced) stiffness.
struct MixedCoupling {
  SparseMatrix coupling;   // C = M_p D_{p-1}
  SparseMatrix aux_mass;   // M_{p-1}
  std::shared_ptr<const SparseCholesky> aux_solver;
};

/// Symmetric pencil (A, B): A = K + C M_aux^{-1} C^T (second term only for
/// the mixed absolute problems), B SPD.
struct EigenProblem {
  SparseMatrix stiffness;
  SparseMatrix mass;
  std::optional<MixedCoupling> mixed;
  /// Columns spanning a known kernel of A that the eigensolver deflates.
  std::optional<SparseMatrix> kernel_basis;
  DofMap dofs;
  int degree = 0;
  BCKind bc = BCKind::ScalarDirichlet;
  ProblemMeta meta;

  int size() const { return static_cast<int>(mass.rows()); }
  Vector apply_stiffness(const Vector& x) const;
  Eigen::MatrixXd dense_stiffness() const;
  Eigen::MatrixXd dense_mass() const { return Eigen::MatrixXd(mass); }
};

EigenProblem scalar_laplacian(const SimplicialComplex& complex, BCKind bc);

/// Absolute boundary conditions as natural conditions of the mixed form with
/// unknowns (sigma, u) in C^{p-1} x C^p, reduced to
/// A = M_p D_{p-1} M_{p-1}^{-1} D_{p-1}^T M_p + D_p^T M_{p+1} D_p, B = M_p.
EigenProblem hodge_laplacian_absolute(const SimplicialComplex& complex, int p);

/// Full trace zero on R^n: binom(n,p) P1 components vanishing on the boundary,
/// block-diagonal scalar Dirichlet stiffness and mass.
EigenProblem true_dirichlet_problem(const SimplicialComplex& complex, int p);

/// The d-stiffness plus delta-stiffness of u = sum_I f_I dx^I with P1
/// components, assembled directly from the wedge/contraction structure on the
/// same dofs as true_dirichlet_problem.
SparseMatrix true_dirichlet_cross_term_matrix(const SimplicialComplex& complex, int p);

/// Edge elements with tangential trace eliminated; the gradient kernel of
/// interior-vertex potentials is attached as kernel_basis.
EigenProblem curl_curl_problem(const SimplicialComplex& complex);

/// problem_A.mtx, problem_B.mtx and a dof-map sidecar next to `prefix`.
void export_problem(const EigenProblem& problem, const std::string& prefix);

/// Rows/columns of `m` restricted to `keep` (both sides).
SparseMatrix restrict_symmetric(const SparseMatrix& m, const std::vector<int>& keep);
/// Columns restricted to `cols`, rows to `rows`.
SparseMatrix restrict_rect(const SparseMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols);

}  // namespace hodgelab
