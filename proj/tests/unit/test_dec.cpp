#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <Eigen/Dense>

#include "hodgelab/dec.hpp"
#include "hodgelab/errors.hpp"
#include "hodgelab/mesh.hpp"

using namespace hodgelab;

namespace {

// Degree-2 exact rules on the reference simplex, barycentric points + weights
// (weights sum to 1, scaled by the cell measure).
struct Rule {
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;
};

Rule degree_two_rule(int n) {
  if (n == 2) return {{{0.5, 0.5, 0, 0}, {0, 0.5, 0.5, 0}, {0.5, 0, 0.5, 0}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  const double a = 0.5854101966249685, b = 0.1381966011250105;
  return {{{a, b, b, b}, {b, a, b, b}, {b, b, a, b}, {b, b, b, a}}, {0.25, 0.25, 0.25, 0.25}};
}

// Whitney p-form of a local face, evaluated as a vector of components in
// the basis dx^I (I ascending subsets of {0..n-1}).
Eigen::VectorXd whitney_value(int n, int p, const std::vector<int>& face, const std::array<double, 4>& lambda,
                              const std::vector<Eigen::VectorXd>& grad) {
  if (p == 0) return Eigen::VectorXd::Constant(1, lambda[face[0]]);
  // Wedge of gradients over the face minus one vertex.
  auto wedge_grads = [&](const std::vector<int>& idx) -> Eigen::VectorXd {
    if (idx.size() == 1) return Eigen::VectorXd(grad[idx[0]]);
    if (idx.size() == 2) {
      const auto& u = grad[idx[0]];
      const auto& v = grad[idx[1]];
      if (n == 2) return Eigen::VectorXd::Constant(1, u[0] * v[1] - u[1] * v[0]);
      Eigen::VectorXd w(3);  // dx0^dx1, dx0^dx2, dx1^dx2
      w << u[0] * v[1] - u[1] * v[0], u[0] * v[2] - u[2] * v[0], u[1] * v[2] - u[2] * v[1];
      return w;
    }
    Eigen::Matrix3d m;
    for (int k = 0; k < 3; ++k) m.col(k) = grad[idx[k]];
    return Eigen::VectorXd::Constant(1, m.determinant());
  };
  double factorial = 1;
  for (int k = 2; k <= p; ++k) factorial *= k;
  Eigen::VectorXd out;
  for (int k = 0; k <= p; ++k) {
    std::vector<int> rest;
    for (int j = 0; j <= p; ++j)
      if (j != k) rest.push_back(face[j]);
    Eigen::VectorXd term = (k % 2 == 0 ? 1.0 : -1.0) * lambda[face[k]] * wedge_grads(rest);
    out = out.size() ? Eigen::VectorXd(out + term) : term;
  }
  return factorial * out;
}

std::vector<std::vector<int>> local_faces(int n, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == p + 1) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v <= n; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

Eigen::MatrixXd quadrature_mass(const SimplicialComplex& mesh, int p) {
  const int n = mesh.dim();
  const int size = mesh.num_simplices(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  const Rule rule = degree_two_rule(n);
  const auto faces = local_faces(n, p);
  for (int c = 0; c < mesh.num_simplices(n); ++c) {
    const auto& cell = mesh.cells()[c];
    Eigen::MatrixXd jac(n, n);
    for (int k = 0; k < n; ++k) jac.col(k) = (mesh.vertices()[cell[k + 1]] - mesh.vertices()[cell[0]]).head(n);
    const double measure = std::abs(jac.determinant()) / (n == 2 ? 2.0 : 6.0);
    const Eigen::MatrixXd inv = jac.inverse();  // rows: gradients of lambda_1..lambda_n
    std::vector<Eigen::VectorXd> grad(n + 1);
    grad[0] = Eigen::VectorXd::Zero(n);
    for (int k = 1; k <= n; ++k) {
      grad[k] = inv.row(k - 1).transpose();
      grad[0] -= grad[k];
    }
    std::vector<int> global;
    for (const auto& f : faces) {
      Simplex s{-1, -1, -1, -1};
      for (int j = 0; j <= p; ++j) s[j] = cell[f[j]];
      global.push_back(*mesh.find(p, s));
    }
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      std::vector<Eigen::VectorXd> vals;
      for (const auto& f : faces) vals.push_back(whitney_value(n, p, f, rule.points[q], grad));
      for (std::size_t i = 0; i < faces.size(); ++i)
        for (std::size_t j = 0; j < faces.size(); ++j)
          m(global[i], global[j]) += rule.weights[q] * measure * vals[i].dot(vals[j]);
    }
  }
  return m;
}

std::vector<SimplicialComplex> small_meshes() {
  return {generate(CanonicalDomain::unit_square(), 3), generate(CanonicalDomain::disk(1.0), 4),
          generate(CanonicalDomain::annulus(0.5, 1.0), 4), generate(CanonicalDomain::unit_cube(), 2)};
}

}  // namespace

TEST_CASE("coboundary structure", "[dec]") {
  for (const auto& mesh : small_meshes()) {
    const int n = mesh.dim();
    for (int p = 0; p < n; ++p) {
      const auto d = coboundary_matrix(mesh, p);
      CHECK(d.matrix.rows() == mesh.num_simplices(p + 1));
      CHECK(d.matrix.cols() == mesh.num_simplices(p));
      bool entries_ok = true;
      for (int k = 0; k < d.matrix.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(d.matrix, k); it; ++it)
          entries_ok = entries_ok && std::abs(it.value()) == 1.0;
      CHECK(entries_ok);
      CHECK(d.matrix.nonZeros() == static_cast<long>(mesh.num_simplices(p + 1)) * (p + 2));
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.num_simplices(0));
    CHECK((coboundary_matrix(mesh, 0).matrix * ones).norm() == 0.0);
    for (int p = 0; p + 1 < n; ++p)
      CHECK((coboundary_matrix(mesh, p + 1).matrix * coboundary_matrix(mesh, p).matrix).norm() == 0.0);
  }
}

TEST_CASE("scalar mass on a triangle", "[dec]") {
  SimplicialComplex tri(2, {Point(0, 0, 0), Point(2, 0, 0), Point(0, 1, 0)}, {make_simplex({0, 1, 2})});
  const Eigen::MatrixXd m0 = mass_matrix(tri, 0).matrix;
  const double area = 1.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(m0(i, j) == Catch::Approx(i == j ? area / 6 : area / 12).epsilon(1e-14));
  CHECK(mass_matrix(tri, 2).matrix.coeff(0, 0) == Catch::Approx(1.0 / area));
}

TEST_CASE("mass matrices against quadrature", "[dec]") {
  for (const auto& mesh : small_meshes()) {
    const int n = mesh.dim();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.num_simplices(0));
    CHECK(ones.dot(mass_matrix(mesh, 0).matrix * ones) == Catch::Approx(mesh.total_volume()).epsilon(1e-12));
    for (int p = 0; p <= n; ++p) {
      const Eigen::MatrixXd m = mass_matrix(mesh, p).matrix;
      const Eigen::MatrixXd ref = quadrature_mass(mesh, p);
      INFO("dim " << n << " p " << p);
      CHECK((m - ref).norm() <= 1e-11 * ref.norm());
      CHECK((m - m.transpose()).norm() <= 1e-15 * m.norm());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("degenerate cell", "[dec]") {
  SimplicialComplex flat(2, {Point(0, 0, 0), Point(1, 0, 0), Point(2, 0, 0), Point(0, 1, 0)},
                         {make_simplex({0, 1, 3}), make_simplex({0, 1, 2})});
  try {
    mass_matrix(flat, 0);
    FAIL("expected an assembly error");
  } catch (const AssemblyError& e) {
    CHECK(flat.cells()[e.cell()] == make_simplex({0, 1, 2}));
  }
}

TEST_CASE("codifferential is the mass adjoint of the coboundary", "[dec]") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  auto random_vector = [&](int size) {
    Eigen::VectorXd v(size);
    for (int i = 0; i < size; ++i) v[i] = g(rng);
    return v;
  };
  for (const auto& mesh : small_meshes()) {
    const int n = mesh.dim();
    for (int p = 1; p <= n; ++p) {
      DiscreteCodifferential delta(mesh, p);
      const SparseMatrix d = coboundary_matrix(mesh, p - 1).matrix;
      const SparseMatrix mp = mass_matrix(mesh, p).matrix;
      const SparseMatrix mq = mass_matrix(mesh, p - 1).matrix;
      double worst = 0;
      for (int trial = 0; trial < 50; ++trial) {
        const Eigen::VectorXd a = random_vector(mesh.num_simplices(p - 1));
        const Eigen::VectorXd b = random_vector(mesh.num_simplices(p));
        const double lhs = (d * a).dot(mp * b);
        const double rhs = a.dot(mq * delta.apply(b));
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
      CHECK(worst < 1e-10);
      if (p >= 2) {
        DiscreteCodifferential lower(mesh, p - 1);
        const Eigen::VectorXd b = random_vector(mesh.num_simplices(p));
        const Eigen::VectorXd db = delta.apply(b);
        CHECK(lower.apply(db).norm() <= 1e-10 * db.norm());
      }
    }
  }
}

TEST_CASE("hodge split", "[dec]") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (const auto& mesh : small_meshes()) {
    const int n = mesh.dim();
    for (int p = 1; p <= n; ++p) {
      HodgeProjector proj(mesh, p);
      Cochain u{p, Eigen::VectorXd(mesh.num_simplices(p))};
      for (int i = 0; i < u.values.size(); ++i) u.values[i] = g(rng);
      const HodgeSplit s = proj.split(u);
      const SparseMatrix& m = proj.mass();
      const double scale = u.values.dot(m * u.values);
      CHECK((s.closed.values + s.coexact.values - u.values).norm() <= 1e-12 * u.values.norm());
      const Eigen::VectorXd dclosed = proj.coboundary() * s.closed.values;
      CHECK(dclosed.norm() <= 1e-8 * (proj.coboundary() * u.values).norm());
      CHECK(std::abs(s.closed.values.dot(m * s.coexact.values)) <= 1e-8 * scale);
      // Co-exact part is orthogonal to every exact form.
      if (p >= 1) {
        const SparseMatrix dprev = coboundary_matrix(mesh, p - 1).matrix;
        Eigen::VectorXd a(mesh.num_simplices(p - 1));
        for (int i = 0; i < a.size(); ++i) a[i] = g(rng);
        const Eigen::VectorXd exact = dprev * a;
        CHECK(std::abs(exact.dot(m * s.coexact.values)) <=
              1e-8 * std::sqrt(scale * exact.dot(m * exact)));
      }
      // Splitting again is idempotent.
      const HodgeSplit again = proj.split(s.closed);
      CHECK(again.coexact.values.norm() <= 1e-8 * std::max(1.0, s.closed.values.norm()));
    }
  }
}

TEST_CASE("exact rank and betti numbers", "[dec]") {
  Eigen::MatrixXd dense(3, 3);
  dense << 1, 2, 3, 2, 4, 6, 1, 0, 1;
  CHECK(exact_rank(dense.sparseView()) == 2);
  CHECK(exact_rank(SparseMatrix(4, 5)) == 0);

  CHECK(betti_numbers(generate(CanonicalDomain::unit_square(), 4)) == std::vector<int>{1, 0, 0});
  CHECK(betti_numbers(generate(CanonicalDomain::annulus(0.5, 1.0), 6)) == std::vector<int>{1, 1, 0});
  CHECK(betti_numbers(generate(CanonicalDomain::l_shape(), 3)) == std::vector<int>{1, 0, 0});
  CHECK(betti_numbers(generate(CanonicalDomain::unit_cube(), 2)) == std::vector<int>{1, 0, 0, 0});
}
