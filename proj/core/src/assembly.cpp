#include "hodgelab/assembly.hpp"

#include <fstream>
#include <map>

#include "hodgelab/errors.hpp"
#include "local_subsets.hpp"

namespace hodgelab {

std::string to_string(BCKind bc) {
  switch (bc) {
    case BCKind::ScalarDirichlet: return "dirichlet";
    case BCKind::ScalarNeumann: return "neumann";
    case BCKind::Absolute: return "absolute";
    case BCKind::TrueDirichlet: return "true-dirichlet";
    case BCKind::CurlCurlRelative: return "curlcurl";
  }
  return "unknown";
}

BCKind parse_bc(const std::string& name) {
  static const std::map<std::string, BCKind> table{
      {"dirichlet", BCKind::ScalarDirichlet},       {"scalar_dirichlet", BCKind::ScalarDirichlet},
      {"neumann", BCKind::ScalarNeumann},           {"scalar_neumann", BCKind::ScalarNeumann},
      {"absolute", BCKind::Absolute},               {"true-dirichlet", BCKind::TrueDirichlet},
      {"true_dirichlet", BCKind::TrueDirichlet},    {"curlcurl", BCKind::CurlCurlRelative},
      {"curlcurl_relative", BCKind::CurlCurlRelative}};
  auto it = table.find(name);
  if (it == table.end()) throw ParameterError("unknown boundary condition '" + name + "'");
  return it->second;
}

Vector DofMap::expand(const Vector& dofs) const {
  const int per = static_cast<int>(kept.size());
  if (dofs.size() != per * components) throw ContractError("dof vector size mismatch");
  Vector full = Vector::Zero(static_cast<Eigen::Index>(full_size) * components);
  for (int c = 0; c < components; ++c)
    for (int i = 0; i < per; ++i) full[c * full_size + kept[i]] = dofs[c * per + i];
  return full;
}

Vector EigenProblem::apply_stiffness(const Vector& x) const {
  Vector y = stiffness * x;
  if (mixed) {
    const Vector t = mixed->aux_solver->solve(mixed->coupling.transpose() * x);
    y += mixed->coupling * t;
  }
  return y;
}

Eigen::MatrixXd EigenProblem::dense_stiffness() const {
  Eigen::MatrixXd a(stiffness);
  if (mixed) {
    const Eigen::MatrixXd ct(mixed->coupling.transpose());
    const Eigen::MatrixXd t = mixed->aux_solver->solve(ct);
    a += mixed->coupling * t;
  }
  return 0.5 * (a + a.transpose());
}

SparseMatrix restrict_rect(const SparseMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  auto selector = [](const std::vector<int>& idx, Eigen::Index full) {
    SparseMatrix s(static_cast<Eigen::Index>(idx.size()), full);
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) t.emplace_back(static_cast<int>(i), idx[i], 1.0);
    s.setFromTriplets(t.begin(), t.end());
    return s;
  };
  const SparseMatrix r = selector(rows, m.rows());
  const SparseMatrix c = selector(cols, m.cols());
  return SparseMatrix(r * m * c.transpose());
}

SparseMatrix restrict_symmetric(const SparseMatrix& m, const std::vector<int>& keep) {
  return restrict_rect(m, keep, keep);
}

namespace {

ProblemMeta meta_for(const SimplicialComplex& complex) {
  return {complex.domain_tag(), complex.dim(), complex.max_edge_length()};
}

std::vector<int> iota_vector(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

SparseMatrix block_diagonal(const SparseMatrix& block, int copies) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(block.nonZeros()) * copies);
  for (int c = 0; c < copies; ++c) {
    const int off = c * static_cast<int>(block.rows());
    for (int k = 0; k < block.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(block, k); it; ++it)
        t.emplace_back(off + static_cast<int>(it.row()), off + static_cast<int>(it.col()), it.value());
  }
  SparseMatrix out(block.rows() * copies, block.cols() * copies);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// Wedge index sets of degree p in R^n, lexicographic.
std::vector<unsigned> index_sets(int n, int p) {
  if (p == 0) return {0u};
  std::vector<unsigned> out;
  for (const auto& sub : detail::local_subsets(n - 1, p - 1)) {
    unsigned s = 0;
    for (int i : sub) s |= 1u << i;
    out.push_back(s);
  }
  return out;
}

int binomial(int n, int k) {
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int wedge_sign(unsigned a, unsigned b) {
  if (a & b) return 0;
  int inversions = 0;
  for (int i = 0; i < 32; ++i)
    if (a & (1u << i)) inversions += __builtin_popcount(b & ((1u << i) - 1u));
  return inversions % 2 ? -1 : 1;
}

}  // namespace

EigenProblem scalar_laplacian(const SimplicialComplex& complex, BCKind bc) {
  if (bc != BCKind::ScalarDirichlet && bc != BCKind::ScalarNeumann)
    throw ContractError("scalar_laplacian expects a scalar boundary condition");
  const SparseMatrix d0 = coboundary_matrix(complex, 0).matrix;
  const SparseMatrix m1 = mass_matrix(complex, 1).matrix;
  SparseMatrix k = d0.transpose() * m1 * d0;
  SparseMatrix m0 = mass_matrix(complex, 0).matrix;

  EigenProblem out;
  out.degree = 0;
  out.bc = bc;
  out.meta = meta_for(complex);
  out.dofs.full_size = complex.num_simplices(0);
  if (bc == BCKind::ScalarDirichlet) {
    out.dofs.kept = complex.interior_indices(0);
    out.dofs.description = "vertex values, boundary vertices eliminated";
    out.stiffness = restrict_symmetric(k, out.dofs.kept);
    out.mass = restrict_symmetric(m0, out.dofs.kept);
  } else {
    out.dofs.kept = iota_vector(out.dofs.full_size);
    out.dofs.description = "vertex values, natural boundary condition";
    out.stiffness = std::move(k);
    out.mass = std::move(m0);
  }
  return out;
}

EigenProblem hodge_laplacian_absolute(const SimplicialComplex& complex, int p) {
  const int n = complex.dim();
  if (p < 0 || p > n) throw ContractError("absolute problem degree out of range");
  EigenProblem out;
  out.degree = p;
  out.bc = BCKind::Absolute;
  out.meta = meta_for(complex);
  out.mass = mass_matrix(complex, p).matrix;
  const int np = complex.num_simplices(p);
  if (p < n) {
    const SparseMatrix d = coboundary_matrix(complex, p).matrix;
    const SparseMatrix m_up = mass_matrix(complex, p + 1).matrix;
    out.stiffness = d.transpose() * m_up * d;
  } else {
    out.stiffness = SparseMatrix(np, np);
  }
  if (p > 0) {
    const SparseMatrix d_prev = coboundary_matrix(complex, p - 1).matrix;
    MixedCoupling mixed;
    mixed.coupling = out.mass * d_prev;
    mixed.aux_mass = mass_matrix(complex, p - 1).matrix;
    mixed.aux_solver = factorize_spd(mixed.aux_mass, "M_" + std::to_string(p - 1));
    out.mixed = std::move(mixed);
  }
  out.dofs.full_size = np;
  out.dofs.kept = iota_vector(np);
  out.dofs.description = "Whitney " + std::to_string(p) + "-form coefficients, absolute (natural) conditions";
  return out;
}

EigenProblem true_dirichlet_problem(const SimplicialComplex& complex, int p) {
  const int n = complex.dim();
  if (p < 0 || p > n) throw ContractError("true Dirichlet degree out of range");
  EigenProblem scalar = scalar_laplacian(complex, BCKind::ScalarDirichlet);
  const int copies = binomial(n, p);
  EigenProblem out;
  out.degree = p;
  out.bc = BCKind::TrueDirichlet;
  out.meta = scalar.meta;
  out.stiffness = copies == 1 ? scalar.stiffness : block_diagonal(scalar.stiffness, copies);
  out.mass = copies == 1 ? scalar.mass : block_diagonal(scalar.mass, copies);
  out.dofs = scalar.dofs;
  out.dofs.components = copies;
  out.dofs.description = std::to_string(copies) + " P1 components f_I of sum_I f_I dx^I, full trace zero";
  return out;
}

SparseMatrix true_dirichlet_cross_term_matrix(const SimplicialComplex& complex, int p) {
  const int n = complex.dim();
  if (p < 0 || p > n) throw ContractError("true Dirichlet degree out of range");
  const auto components = index_sets(n, p);
  std::map<unsigned, int> component_of;
  for (std::size_t c = 0; c < components.size(); ++c) component_of[components[c]] = static_cast<int>(c);

  const std::vector<int> interior = complex.interior_indices(0);
  std::vector<int> dof_of(complex.num_simplices(0), -1);
  for (std::size_t i = 0; i < interior.size(); ++i) dof_of[interior[i]] = static_cast<int>(i);
  const int per = static_cast<int>(interior.size());

  // Each target basis form collects (component, derivative direction, sign)
  // contributions: dx^K from d(f_I dx^I), dx^L from delta(f_I dx^I).
  struct Contribution {
    int component;
    int direction;
    int sign;
  };
  std::map<std::pair<int, unsigned>, std::vector<Contribution>> targets;  // (0=d,1=delta, set)
  for (std::size_t c = 0; c < components.size(); ++c) {
    const unsigned s = components[c];
    for (int j = 0; j < n; ++j) {
      const unsigned bit = 1u << j;
      if (s & bit) {
        // delta = -sum_i iota_{e_i} d/dx_i
        targets[{1, s & ~bit}].push_back({static_cast<int>(c), j, -wedge_sign(bit, s & ~bit)});
      } else {
        targets[{0, s | bit}].push_back({static_cast<int>(c), j, wedge_sign(bit, s)});
      }
    }
  }

  std::vector<Eigen::Triplet<double>> entries;
  for (int cell = 0; cell < complex.num_simplices(n); ++cell) {
    const auto& verts = complex.cells()[cell];
    Eigen::MatrixXd edges(n, n);
    for (int k = 1; k <= n; ++k) edges.col(k - 1) = (complex.vertices()[verts[k]] - complex.vertices()[verts[0]]).head(n);
    const double det = edges.determinant();
    if (det == 0.0) throw AssemblyError(cell, "degenerate cell (zero volume)");
    double volume = std::abs(det);
    for (int k = 2; k <= n; ++k) volume /= k;
    Eigen::MatrixXd grads = Eigen::MatrixXd::Zero(n + 1, n);
    grads.bottomRows(n) = edges.inverse();
    grads.row(0) = -grads.bottomRows(n).colwise().sum();

    for (const auto& [key, contribs] : targets) {
      for (const auto& u : contribs) {
        for (const auto& v : contribs) {
          const double s = volume * u.sign * v.sign;
          for (int a = 0; a <= n; ++a) {
            const int da = dof_of[verts[a]];
            if (da < 0) continue;
            for (int b = 0; b <= n; ++b) {
              const int db = dof_of[verts[b]];
              if (db < 0) continue;
              entries.emplace_back(u.component * per + da, v.component * per + db,
                                   s * grads(a, u.direction) * grads(b, v.direction));
            }
          }
        }
      }
    }
  }
  const int size = per * static_cast<int>(components.size());
  SparseMatrix out(size, size);
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

EigenProblem curl_curl_problem(const SimplicialComplex& complex) {
  if (complex.dim() != 3) throw ContractError("curl-curl problem requires a 3D complex");
  const SparseMatrix d0 = coboundary_matrix(complex, 0).matrix;
  const SparseMatrix d1 = coboundary_matrix(complex, 1).matrix;
  const SparseMatrix m1 = mass_matrix(complex, 1).matrix;
  const SparseMatrix m2 = mass_matrix(complex, 2).matrix;
  const std::vector<int> edges = complex.interior_indices(1);
  const std::vector<int> verts = complex.interior_indices(0);

  EigenProblem out;
  out.degree = 1;
  out.bc = BCKind::CurlCurlRelative;
  out.meta = meta_for(complex);
  out.stiffness = restrict_symmetric(SparseMatrix(d1.transpose() * m2 * d1), edges);
  out.mass = restrict_symmetric(m1, edges);
  out.kernel_basis = restrict_rect(d0, edges, verts);
  out.dofs.full_size = complex.num_simplices(1);
  out.dofs.kept = edges;
  out.dofs.description = "Whitney 1-form coefficients, boundary edges eliminated (u x nu = 0); "
                         "gradients of interior-vertex potentials deflated";
  return out;
}

void export_problem(const EigenProblem& problem, const std::string& prefix) {
  write_matrix_market(problem.stiffness, prefix + "_A.mtx");
  write_matrix_market(problem.mass, prefix + "_B.mtx");
  if (problem.mixed) {
    write_matrix_market(problem.mixed->coupling, prefix + "_C.mtx");
    write_matrix_market(problem.mixed->aux_mass, prefix + "_Maux.mtx");
  }
  if (problem.kernel_basis) write_matrix_market(*problem.kernel_basis, prefix + "_kernel.mtx");

  std::ofstream os(prefix + "_dofmap.txt");
  if (!os) throw std::runtime_error("cannot write " + prefix + "_dofmap.txt");
  os << "bc " << to_string(problem.bc) << "\n"
     << "degree " << problem.degree << "\n"
     << "description " << problem.dofs.description << "\n"
     << "components " << problem.dofs.components << "\n"
     << "full_size " << problem.dofs.full_size << "\n"
     << "kept " << problem.dofs.kept.size() << "\n";
  if (problem.mixed) os << "stiffness A + C * inv(Maux) * C^T\n";
  for (int k : problem.dofs.kept) os << k << "\n";
}

}  // namespace hodgelab
