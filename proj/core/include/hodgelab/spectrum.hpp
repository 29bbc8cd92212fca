#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hodgelab/assembly.hpp"
#include "hodgelab/mesh.hpp"

namespace hodgelab {

enum class FormTag { Closed, Coexact, Harmonic, Unresolved };
std::string to_string(FormTag tag);

struct SolveOptions {
  int count = 10;
  /// Bound on the scaled residual ||A x - a B x|| / ((|a| + shift) ||B x||).
  double tol = 1e-10;
  std::uint64_t seed = 0;
  /// Pencil is factorized as A + shift * B.
  double shift = 1.0;
  int block_size = 6;
  int max_restarts = 60;
  /// Below this size the dense generalized solver is used.
  int dense_threshold = 500;
};

struct SpectrumResult {
  ProblemMeta meta;
  int degree = 0;
  BCKind bc = BCKind::ScalarDirichlet;
  std::vector<double> eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;      // B-orthonormal columns, dof space
  std::vector<double> residuals;
  std::vector<FormTag> tags;         // empty until classified
  int harmonic_count = 0;
  double harmonic_threshold = 0.0;
  std::string method;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// Harmonic threshold max(1e-8 * largest, 0.1 * h^2).
double harmonic_threshold(const std::vector<double>& eigenvalues, double h);

/// k smallest eigenpairs of (A, B). Block shift-invert Lanczos with full
/// B-reorthogonalization and thick restarts; dense generalized solver below
/// `dense_threshold`. A known kernel (problem.kernel_basis) is deflated.
/// Deterministic for a fixed seed.
SpectrumResult solve(const EigenProblem& problem, const SolveOptions& options);

/// Constants for classification.
struct ClassifyOptions {
  double ratio = 1e-6;        // closed / co-exact energy ratio
  double cluster_tol = 1e-6;  // relative gap inside degenerate clusters
};

/// Tags every pair CLOSED / COEXACT / HARMONIC / UNRESOLVED from the energies
/// ||D_p u||^2 and ||delta_h u||^2. Degenerate clusters are first rotated so
/// that each basis vector lies in the closed or the co-exact subspace.
/// Valid for absolute and scalar Neumann results.
void classify_eigenforms(SpectrumResult& result, const SimplicialComplex& complex,
                         const ClassifyOptions& options = {});

struct PairEntry {
  int index = 0;              // eigenpair index in the degree-p result
  double eigenvalue = 0.0;
  double rayleigh = 0.0;      // of D_p xi in the degree-(p+1) absolute pencil
  double relative_gap = 0.0;  // |rayleigh - eigenvalue| / eigenvalue
  double energy_defect = 0.0; // | ||D xi||^2 - a ||xi||^2 | / (a ||xi||^2)
};

struct PairingReport {
  int degree = 0;
  std::vector<PairEntry> pairs;
  int skipped_harmonic = 0;
};

/// Pushes each COEXACT degree-p eigenform forward by D_p and measures it in
/// the degree-(p+1) absolute pencil.
PairingReport pair_across_degrees(const SpectrumResult& result_p, const SimplicialComplex& complex);

struct PairCountReport {
  int coexact_count = 0;   // COEXACT degree-p values considered (first K)
  int matched_closed = 0;  // CLOSED non-harmonic degree-(p+1) values matched to them
  double worst_deviation = 0.0;
};

/// Greedily matches the first K COEXACT degree-p eigenvalues against CLOSED
/// non-harmonic degree-(p+1) eigenvalues within rel_tol.
PairCountReport match_pair_counts(const SpectrumResult& result_p, const SpectrumResult& result_p1, int k,
                                  double rel_tol);

}  // namespace hodgelab
