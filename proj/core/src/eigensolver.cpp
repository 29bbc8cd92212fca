#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "hodgelab/errors.hpp"
#include "hodgelab/spectrum.hpp"

namespace hodgelab {

std::string to_string(FormTag tag) {
  switch (tag) {
    case FormTag::Closed: return "CLOSED";
    case FormTag::Coexact: return "COEXACT";
    case FormTag::Harmonic: return "HARMONIC";
    case FormTag::Unresolved: return "UNRESOLVED";
  }
  return "UNRESOLVED";
}

double harmonic_threshold(const std::vector<double>& eigenvalues, double h) {
  const double largest = eigenvalues.empty() ? 0.0 : *std::max_element(eigenvalues.begin(), eigenvalues.end());
  return std::max(1e-8 * largest, 0.1 * h * h);
}

namespace {

using Eigen::MatrixXd;

// x -> (A + shift B)^{-1} B x. Mixed problems factor the quasi-definite
// saddle-point matrix [[-M_aux, C^T], [C, K + shift B]] instead of the dense
// Schur complement.
class ShiftInvert {
 public:
  ShiftInvert(const EigenProblem& problem, double shift) : problem_(problem) {
    const SparseMatrix shifted = problem.stiffness + shift * problem.mass;
    if (!problem.mixed) {
      matrix_ = shifted;
      aux_ = 0;
    } else {
      const auto& mx = *problem.mixed;
      aux_ = static_cast<int>(mx.aux_mass.rows());
      const int n = problem.size();
      std::vector<Eigen::Triplet<double>> t;
      t.reserve(static_cast<std::size_t>(mx.aux_mass.nonZeros() + 2 * mx.coupling.nonZeros() + shifted.nonZeros()));
      for (int k = 0; k < mx.aux_mass.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(mx.aux_mass, k); it; ++it)
          t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), -it.value());
      for (int k = 0; k < mx.coupling.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(mx.coupling, k); it; ++it) {
          t.emplace_back(aux_ + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
          t.emplace_back(static_cast<int>(it.col()), aux_ + static_cast<int>(it.row()), it.value());
        }
      for (int k = 0; k < shifted.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(shifted, k); it; ++it)
          t.emplace_back(aux_ + static_cast<int>(it.row()), aux_ + static_cast<int>(it.col()), it.value());
      matrix_.resize(aux_ + n, aux_ + n);
      matrix_.setFromTriplets(t.begin(), t.end());
    }
    solver_.compute(matrix_);
    if (solver_.info() != Eigen::Success) throw NumericalError("shift-invert factorization failed");
  }

  MatrixXd apply(const MatrixXd& x) const {
    const MatrixXd bx = problem_.mass * x;
    MatrixXd rhs = MatrixXd::Zero(aux_ + bx.rows(), bx.cols());
    rhs.bottomRows(bx.rows()) = bx;
    MatrixXd sol = solver_.solve(rhs);
    // One step of iterative refinement; residual accuracy of the Ritz pairs
    // is otherwise capped by the conditioning of the shifted matrix.
    sol += solver_.solve(MatrixXd(rhs - matrix_ * sol));
    return sol.bottomRows(bx.rows());
  }

 private:
  const EigenProblem& problem_;
  SparseMatrix matrix_;
  Eigen::SimplicialLDLT<SparseMatrix> solver_;
  int aux_ = 0;
};

// B-orthogonal projector onto the complement of span(G).
class KernelDeflation {
 public:
  KernelDeflation(const EigenProblem& problem) : problem_(problem) {
    if (!problem.kernel_basis) return;
    g_ = *problem.kernel_basis;
    const SparseMatrix gram = g_.transpose() * problem.mass * g_;
    gram_solver_.compute(gram);
    if (gram_solver_.info() != Eigen::Success) throw NumericalError("kernel Gram factorization failed");
    active_ = true;
  }

  bool active() const { return active_; }
  int dimension() const { return active_ ? static_cast<int>(g_.cols()) : 0; }

  void apply(MatrixXd& x) const {
    if (!active_) return;
    const MatrixXd coeff = gram_solver_.solve(MatrixXd(g_.transpose() * (problem_.mass * x)));
    x -= g_ * coeff;
  }

  // Fraction of B-norm^2 of x lying in span(G).
  double kernel_fraction(const Eigen::VectorXd& x) const {
    if (!active_) return 0.0;
    const Eigen::VectorXd gbx = g_.transpose() * (problem_.mass * x);
    const double in_kernel = gbx.dot(gram_solver_.solve(gbx));
    return in_kernel / x.dot(problem_.mass * x);
  }

 private:
  const EigenProblem& problem_;
  SparseMatrix g_;
  Eigen::SimplicialLLT<SparseMatrix> gram_solver_;
  bool active_ = false;
};

// Portable uniform draws in [-1, 1).
MatrixXd random_block(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  MatrixXd x(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) x(i, j) = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
  return x;
}

// Basis with cached B*V; columns B-orthonormal.
struct Basis {
  MatrixXd v;
  MatrixXd bv;
  MatrixXd op;  // Op applied to the first op.cols() columns of v
};

// Orthogonalizes `w` against the basis and within itself (two passes of
// classical Gram-Schmidt in the B-inner product) and appends the surviving
// columns. Returns how many were appended.
int append_orthonormal(Basis& basis, MatrixXd w, const SparseMatrix& mass) {
  const Eigen::Index n = w.rows();
  const Eigen::VectorXd original_norms = (w.cwiseProduct(mass * w)).colwise().sum().cwiseAbs().cwiseSqrt();
  for (int pass = 0; pass < 2; ++pass)
    if (basis.v.cols() > 0) w -= basis.v * (basis.bv.transpose() * w);

  int added = 0;
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    Eigen::VectorXd x = w.col(j);
    const Eigen::Index start = basis.v.cols() - added;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = start; c < basis.v.cols(); ++c) x -= basis.v.col(c) * basis.bv.col(c).dot(x);
      if (basis.v.cols() > 0 && pass == 1) x -= basis.v * (basis.bv.transpose() * x);
    }
    const Eigen::VectorXd bx = mass * x;
    const double norm = std::sqrt(std::max(0.0, x.dot(bx)));
    if (!(norm > 1e-13 * std::max(original_norms[j], 1e-300))) continue;
    basis.v.conservativeResize(n, basis.v.cols() + 1);
    basis.bv.conservativeResize(n, basis.bv.cols() + 1);
    basis.v.col(basis.v.cols() - 1) = x / norm;
    basis.bv.col(basis.bv.cols() - 1) = bx / norm;
    ++added;
  }
  return added;
}

struct Residuals {
  std::vector<double> values;
  double worst = 0.0;
};

Residuals residuals_of(const EigenProblem& problem, const MatrixXd& x, const std::vector<double>& lambda,
                       double shift) {
  Residuals out;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Eigen::VectorXd bx = problem.mass * x.col(j);
    const Eigen::VectorXd r = problem.apply_stiffness(x.col(j)) - lambda[j] * bx;
    const double scaled = r.norm() / ((std::abs(lambda[j]) + shift) * bx.norm());
    out.values.push_back(scaled);
    out.worst = std::max(out.worst, scaled);
  }
  return out;
}

SpectrumResult make_result(const EigenProblem& problem, const std::string& method) {
  SpectrumResult r;
  r.meta = problem.meta;
  r.degree = problem.degree;
  r.bc = problem.bc;
  r.method = method;
  return r;
}

void finish(SpectrumResult& r) {
  r.harmonic_threshold = harmonic_threshold(r.eigenvalues, r.meta.h);
  r.harmonic_count = static_cast<int>(
      std::count_if(r.eigenvalues.begin(), r.eigenvalues.end(), [&](double a) { return a < r.harmonic_threshold; }));
}

SpectrumResult solve_dense(const EigenProblem& problem, const SolveOptions& options,
                           const KernelDeflation& deflation) {
  const MatrixXd a = problem.dense_stiffness();
  const MatrixXd b = problem.dense_mass();
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(a, b);
  if (es.info() != Eigen::Success) throw NumericalError("dense generalized eigensolver failed");

  SpectrumResult r = make_result(problem, "dense");
  std::vector<Eigen::Index> chosen;
  for (Eigen::Index j = 0; j < es.eigenvalues().size() && static_cast<int>(chosen.size()) < options.count; ++j) {
    if (deflation.kernel_fraction(es.eigenvectors().col(j)) > 0.5) continue;
    chosen.push_back(j);
  }
  if (static_cast<int>(chosen.size()) < options.count) throw ContractError("fewer eigenpairs than requested");
  r.eigenvectors.resize(a.rows(), options.count);
  for (int i = 0; i < options.count; ++i) {
    r.eigenvalues.push_back(es.eigenvalues()[chosen[i]]);
    r.eigenvectors.col(i) = es.eigenvectors().col(chosen[i]);
  }
  auto res = residuals_of(problem, r.eigenvectors, r.eigenvalues, options.shift);
  r.residuals = res.values;
  finish(r);
  return r;
}

SpectrumResult solve_lanczos(const EigenProblem& problem, const SolveOptions& options,
                             const KernelDeflation& deflation) {
  const int n = problem.size();
  const int k = options.count;
  const int b = std::max(1, options.block_size);
  const int available = n - deflation.dimension();
  const int max_basis = std::min(available, 2 * k + 4 * b);
  const int keep = std::min(max_basis - b, k + b);

  ShiftInvert op(problem, options.shift);
  std::mt19937_64 rng(options.seed);
  Basis basis;

  auto fresh_block = [&](int cols) {
    MatrixXd x = random_block(rng, n, cols);
    deflation.apply(x);
    return x;
  };
  append_orthonormal(basis, fresh_block(b), problem.mass);

  std::vector<double> last_residuals;
  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    // Expand: apply the operator to columns that do not have it yet.
    while (basis.v.cols() < max_basis) {
      const Eigen::Index done = basis.op.cols();
      const Eigen::Index pending = basis.v.cols() - done;
      if (pending > 0) {
        MatrixXd w = op.apply(basis.v.rightCols(pending));
        deflation.apply(w);
        basis.op.conservativeResize(n, basis.v.cols());
        basis.op.rightCols(pending) = w;
        const int room = static_cast<int>(max_basis - basis.v.cols());
        if (room <= 0) break;
        MatrixXd next = w.leftCols(std::min<Eigen::Index>(pending, room));
        if (append_orthonormal(basis, next, problem.mass) == 0) {
          append_orthonormal(basis, fresh_block(std::min(b, room)), problem.mass);
        }
      } else {
        const int room = static_cast<int>(max_basis - basis.v.cols());
        if (append_orthonormal(basis, fresh_block(std::min(b, room)), problem.mass) == 0) break;
      }
    }
    if (basis.op.cols() < basis.v.cols()) {
      const Eigen::Index pending = basis.v.cols() - basis.op.cols();
      MatrixXd w = op.apply(basis.v.rightCols(pending));
      deflation.apply(w);
      basis.op.conservativeResize(n, basis.v.cols());
      basis.op.rightCols(pending) = w;
    }

    // Rayleigh-Ritz on H = V^T B Op V.
    MatrixXd h = basis.bv.transpose() * basis.op;
    h = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
    const Eigen::Index m = h.rows();
    if (m < k) throw NumericalError("Krylov basis smaller than requested count");
    // Largest theta first.
    MatrixXd s = es.eigenvectors().rowwise().reverse();
    Eigen::VectorXd theta = es.eigenvalues().reverse();

    std::vector<double> lambda(k);
    for (int i = 0; i < k; ++i) lambda[i] = 1.0 / theta[i] - options.shift;
    const MatrixXd x = basis.v * s.leftCols(k);
    const auto res = residuals_of(problem, x, lambda, options.shift);
    last_residuals = res.values;

    if (res.worst <= options.tol || m >= available) {
      SpectrumResult r = make_result(problem, "block-lanczos");
      r.eigenvalues = lambda;
      r.eigenvectors = x;
      r.residuals = res.values;
      finish(r);
      return r;
    }

    // Thick restart: keep the leading Ritz vectors, expand from Op of the
    // unconverged ones.
    const int kept = std::min<int>(keep, static_cast<int>(m));
    const MatrixXd sk = s.leftCols(kept);
    Basis next;
    next.v = basis.v * sk;
    next.bv = basis.bv * sk;
    next.op = basis.op * sk;
    {
      // Restore B-orthonormality lost to repeated recombination.
      MatrixXd gram = next.v.transpose() * next.bv;
      gram = 0.5 * (gram + gram.transpose());
      Eigen::LLT<MatrixXd> llt(gram);
      const MatrixXd rinv = llt.matrixU().solve(MatrixXd::Identity(kept, kept));
      next.v = next.v * rinv;
      next.bv = next.bv * rinv;
      next.op = next.op * rinv;
    }
    std::vector<int> unconverged;
    for (int i = 0; i < k; ++i)
      if (res.values[i] > options.tol) unconverged.push_back(i);
    MatrixXd seed_block(n, std::min<int>(b, static_cast<int>(unconverged.size())));
    for (Eigen::Index j = 0; j < seed_block.cols(); ++j) seed_block.col(j) = next.op.col(unconverged[j]);
    basis = std::move(next);
    if (append_orthonormal(basis, seed_block, problem.mass) == 0)
      append_orthonormal(basis, fresh_block(b), problem.mass);
  }
  throw NumericalError("block Lanczos did not converge", last_residuals);
}

}  // namespace

SpectrumResult solve(const EigenProblem& problem, const SolveOptions& options) {
  const int n = problem.size();
  if (options.count < 1) throw ContractError("eigenpair count must be positive");
  KernelDeflation deflation(problem);
  if (options.count > n - deflation.dimension()) throw ContractError("requested more eigenpairs than dofs");
  if (n < options.dense_threshold) return solve_dense(problem, options, deflation);
  return solve_lanczos(problem, options, deflation);
}

}  // namespace hodgelab
