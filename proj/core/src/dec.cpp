#include "hodgelab/dec.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <unsupported/Eigen/SparseExtra>

#include "hodgelab/errors.hpp"
#include "local_subsets.hpp"

namespace hodgelab {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Determinant of the Gram submatrix on rows `r` and columns `c`.
double minor_det(const Eigen::Matrix4d& gram, const std::vector<int>& r, const std::vector<int>& c) {
  const int m = static_cast<int>(r.size());
  if (m == 0) return 1.0;
  Eigen::Matrix3d sub = Eigen::Matrix3d::Identity();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) sub(i, j) = gram(r[i], c[j]);
  if (m == 1) return sub(0, 0);
  if (m == 2) return sub.topLeftCorner<2, 2>().determinant();
  return sub.determinant();
}

std::vector<int> without(const std::vector<int>& v, int k) {
  std::vector<int> out;
  out.reserve(v.size() - 1);
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (i != k) out.push_back(v[i]);
  return out;
}

}  // namespace

OperatorMatrix coboundary_matrix(const SimplicialComplex& complex, int p) {
  if (p < 0 || p >= complex.dim()) throw ContractError("coboundary degree out of range");
  const auto& upper = complex.skeleton(p + 1);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(upper.size() * (p + 2));
  for (std::size_t r = 0; r < upper.size(); ++r) {
    for (int k = 0; k <= p + 1; ++k) {
      Simplex face{-1, -1, -1, -1};
      for (int j = 0, m = 0; j <= p + 1; ++j)
        if (j != k) face[m++] = upper[r][j];
      const int col = *complex.find(p, face);
      entries.emplace_back(static_cast<int>(r), col, k % 2 ? -1.0 : 1.0);
    }
  }
  SparseMatrix d(complex.num_simplices(p + 1), complex.num_simplices(p));
  d.setFromTriplets(entries.begin(), entries.end());
  return {std::move(d), {p, false}, {p + 1, false}};
}

OperatorMatrix mass_matrix(const SimplicialComplex& complex, int p) {
  const int n = complex.dim();
  if (p < 0 || p > n) throw ContractError("mass matrix degree out of range");
  const auto& subsets = detail::local_subsets(n, p);
  const int nloc = static_cast<int>(subsets.size());
  const double scale = std::pow(complex.max_edge_length(), n);
  const double pf2 = factorial(p) * factorial(p);

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(complex.cells().size() * nloc * nloc);
  for (int c = 0; c < complex.num_simplices(n); ++c) {
    const auto& cell = complex.cells()[c];
    Eigen::MatrixXd edges(n, n);
    for (int k = 1; k <= n; ++k) edges.col(k - 1) = (complex.vertices()[cell[k]] - complex.vertices()[cell[0]]).head(n);
    const double det = edges.determinant();
    if (!(std::abs(det) > 1e-14 * scale)) throw AssemblyError(c, "degenerate cell (zero volume)");
    const double volume = std::abs(det) / factorial(n);

    // Rows are barycentric gradients; grad(lambda_0) = -sum of the others.
    Eigen::MatrixXd grads = Eigen::MatrixXd::Zero(n + 1, n);
    grads.bottomRows(n) = edges.inverse();
    grads.row(0) = -grads.bottomRows(n).colwise().sum();
    Eigen::Matrix4d gram = Eigen::Matrix4d::Zero();
    gram.topLeftCorner(n + 1, n + 1) = grads * grads.transpose();

    const double lambda_pair = volume / ((n + 1) * (n + 2));  // integral of lambda_a lambda_b, a != b
    for (int i = 0; i < nloc; ++i) {
      const auto& fi = subsets[i];
      for (int j = 0; j < nloc; ++j) {
        const auto& fj = subsets[j];
        double value = 0.0;
        for (int k = 0; k <= p; ++k) {
          for (int l = 0; l <= p; ++l) {
            const double integral = lambda_pair * (fi[k] == fj[l] ? 2.0 : 1.0);
            const double sign = (k + l) % 2 ? -1.0 : 1.0;
            value += sign * integral * minor_det(gram, without(fi, k), without(fj, l));
          }
        }
        entries.emplace_back(complex.cell_face(p, c, i), complex.cell_face(p, c, j), pf2 * value);
      }
    }
  }
  SparseMatrix m(complex.num_simplices(p), complex.num_simplices(p));
  m.setFromTriplets(entries.begin(), entries.end());
  return {std::move(m), {p, false}, {p, false}};
}

std::shared_ptr<const SparseCholesky> factorize_spd(const SparseMatrix& m, const std::string& what) {
  auto solver = std::make_shared<SparseCholesky>();
  solver->compute(m);
  if (solver->info() != Eigen::Success) throw NumericalError("Cholesky factorization failed: " + what);
  return solver;
}

DiscreteCodifferential::DiscreteCodifferential(const SimplicialComplex& complex, int p) : p_(p) {
  if (p < 0 || p > complex.dim()) throw ContractError("codifferential degree out of range");
  mass_ = mass_matrix(complex, p).matrix;
  if (p > 0) {
    d_prev_ = coboundary_matrix(complex, p - 1).matrix;
    mass_prev_ = mass_matrix(complex, p - 1).matrix;
    mass_prev_solver_ = factorize_spd(mass_prev_, "M_" + std::to_string(p - 1));
  }
}

Vector DiscreteCodifferential::apply(const Vector& b) const {
  if (p_ == 0) return Vector(0);
  Vector rhs = d_prev_.transpose() * (mass_ * b);
  Vector out = mass_prev_solver_->solve(rhs);
  if (mass_prev_solver_->info() != Eigen::Success) throw NumericalError("mass solve failed");
  return out;
}

HodgeProjector::HodgeProjector(const SimplicialComplex& complex, int p) : p_(p) {
  if (p < 1 || p > complex.dim()) throw ContractError("hodge split degree must be in [1, dim]");
  mass_ = mass_matrix(complex, p).matrix;
  mass_solver_ = factorize_spd(mass_, "M_" + std::to_string(p));
  if (p < complex.dim()) d_ = coboundary_matrix(complex, p).matrix;
}

HodgeSplit HodgeProjector::split(const Cochain& u) const {
  if (u.degree != p_ || u.values.size() != mass_.rows()) throw ContractError("cochain does not match projector");
  HodgeSplit out{{p_, u.values}, {p_, Vector::Zero(u.values.size())}, 0, 0.0};
  if (d_.size() == 0) return out;  // top degree: everything is closed

  // Solve S z = D u with S = D M^{-1} D^T; then coexact = M^{-1} D^T z.
  auto apply_s = [&](const Vector& z) -> Vector { return d_ * mass_solver_->solve(d_.transpose() * z); };
  const Vector rhs = d_ * u.values;
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return out;

  Vector z = Vector::Zero(rhs.size());
  Vector r = rhs;
  Vector dir = r;
  double rr = r.squaredNorm();
  const int max_iter = 10 * static_cast<int>(rhs.size());
  // Floor at roundoff level of D u: a nearly closed input has a rhs that is
  // mostly noise, part of it outside the range of S.
  const double tol = std::max(1e-10 * rhs_norm, 1e-14 * d_.norm() * u.values.norm());
  int it = 0;
  while (std::sqrt(rr) > tol) {
    if (it >= max_iter)
      throw NumericalError("hodge split: CG did not converge", {std::sqrt(rr) / rhs_norm});
    const Vector sd = apply_s(dir);
    const double alpha = rr / dir.dot(sd);
    z += alpha * dir;
    r -= alpha * sd;
    const double rr_new = r.squaredNorm();
    dir = r + (rr_new / rr) * dir;
    rr = rr_new;
    ++it;
  }
  out.coexact.values = mass_solver_->solve(d_.transpose() * z);
  out.closed.values = u.values - out.coexact.values;
  out.iterations = it;
  out.residual = std::sqrt(rr) / rhs_norm;
  return out;
}

HodgeSplit hodge_split(const SimplicialComplex& complex, int p, const Cochain& u) {
  return HodgeProjector(complex, p).split(u);
}

int exact_rank(const SparseMatrix& integer_matrix) {
  using boost::multiprecision::cpp_int;
  const int rows = static_cast<int>(integer_matrix.rows());
  const int cols = static_cast<int>(integer_matrix.cols());
  std::vector<std::vector<cpp_int>> a(rows, std::vector<cpp_int>(cols, 0));
  for (int k = 0; k < integer_matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(integer_matrix, k); it; ++it) {
      const double v = it.value();
      if (v != std::round(v)) throw ContractError("exact_rank expects integer entries");
      a[it.row()][it.col()] = static_cast<long long>(std::llround(v));
    }
  }
  // Bareiss fraction-free elimination; every division is exact.
  int rank = 0;
  cpp_int prev = 1;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int i = rank; i < rows; ++i)
      if (a[i][col] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[pivot], a[rank]);
    for (int i = rank + 1; i < rows; ++i) {
      for (int j = col + 1; j < cols; ++j) a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

std::vector<int> betti_numbers(const SimplicialComplex& complex) {
  const int n = complex.dim();
  std::vector<int> ranks(n + 1, 0);  // ranks[p] = rank D_p
  for (int p = 0; p < n; ++p) ranks[p] = exact_rank(coboundary_matrix(complex, p).matrix);
  std::vector<int> betti(n + 1);
  for (int p = 0; p <= n; ++p) {
    const int kernel = complex.num_simplices(p) - ranks[p];
    betti[p] = kernel - (p > 0 ? ranks[p - 1] : 0);
  }
  return betti;
}

void write_matrix_market(const SparseMatrix& m, const std::string& path) {
  if (!Eigen::saveMarket(m, path)) throw std::runtime_error("cannot write " + path);
}

}  // namespace hodgelab
