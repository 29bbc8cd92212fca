#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>

#include "hodgelab/dec.hpp"
#include "hodgelab/errors.hpp"
#include "hodgelab/mesh.hpp"

using namespace hodgelab;

namespace {

std::vector<std::array<double, 3>> sorted_coordinates(const SimplicialComplex& c) {
  std::vector<std::array<double, 3>> out;
  for (const auto& v : c.vertices()) out.push_back({v[0], v[1], v[2]});
  std::sort(out.begin(), out.end());
  return out;
}

bool same_vertex_sets(const SimplicialComplex& a, const SimplicialComplex& b) {
  auto va = sorted_coordinates(a), vb = sorted_coordinates(b);
  if (va.size() != vb.size()) return false;
  // Sorting can interleave near-equal coordinates, so match greedily instead.
  std::vector<bool> used(vb.size(), false);
  for (const auto& p : va) {
    bool found = false;
    for (std::size_t j = 0; j < vb.size() && !found; ++j) {
      if (used[j]) continue;
      double d = 0;
      for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(p[k] - vb[j][k]));
      if (d <= 1e-12) used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("simplex counts and euler characteristic", "[mesh]") {
  auto sq = generate(CanonicalDomain::unit_square(), 1);
  CHECK(sq.num_simplices(0) == 4);
  CHECK(sq.num_simplices(1) == 5);
  CHECK(sq.num_simplices(2) == 2);
  CHECK(sq.euler_characteristic() == 1);

  auto cube = generate(CanonicalDomain::unit_cube(), 1);
  CHECK(cube.num_simplices(0) == 8);
  CHECK(cube.num_simplices(1) == 19);
  CHECK(cube.num_simplices(2) == 18);
  CHECK(cube.num_simplices(3) == 6);
  CHECK(cube.euler_characteristic() == 1);

  for (int res : {4, 8, 16}) {
    auto ann = generate(CanonicalDomain::annulus(0.5, 1.0), res);
    CHECK(ann.euler_characteristic() == 0);
    auto disk = generate(CanonicalDomain::disk(1.0), res);
    CHECK(disk.euler_characteristic() == 1);
    auto l = generate(CanonicalDomain::l_shape(), res);
    CHECK(l.euler_characteristic() == 1);
  }
  auto sq8 = generate(CanonicalDomain::unit_square(), 8);
  CHECK(sq8.num_simplices(0) == 81);
  CHECK(sq8.num_simplices(2) == 128);
  CHECK(sq8.total_volume() == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(generate(CanonicalDomain::unit_cube(), 3).total_volume() == Catch::Approx(1.0).epsilon(1e-12));
  // Inscribed polygon area tends to pi.
  CHECK(generate(CanonicalDomain::disk(1.0), 32).total_volume() == Catch::Approx(M_PI).epsilon(0.01));
}

TEST_CASE("invalid domain parameters", "[mesh]") {
  CHECK_THROWS_AS(generate(CanonicalDomain::annulus(1.0, 0.5), 4), ParameterError);
  CHECK_THROWS_AS(generate(CanonicalDomain::annulus(1.0, 1.0), 4), ParameterError);
  CHECK_THROWS_AS(generate(CanonicalDomain::disk(-1.0), 4), ParameterError);
  CHECK_THROWS_AS(generate(CanonicalDomain::rectangle(0.0, 1.0), 4), ParameterError);
  CHECK_THROWS_AS(generate(CanonicalDomain::unit_square(), 0), ParameterError);
}

TEST_CASE("boundary submesh", "[mesh]") {
  SimplicialComplex tri(2, {Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0)}, {make_simplex({0, 1, 2})});
  auto b = boundary_submesh(tri);
  CHECK(b.faces.size() == 3);
  CHECK(b.components == 1);

  auto sq = boundary_submesh(generate(CanonicalDomain::unit_square(), 1));
  CHECK(sq.faces.size() == 4);
  CHECK(sq.components == 1);

  auto ann_mesh = generate(CanonicalDomain::annulus(0.5, 1.0), 12);
  auto ann = boundary_submesh(ann_mesh);
  CHECK(ann.components == 2);
  for (int f : ann.faces) {
    const auto& e = ann_mesh.skeleton(1)[f];
    for (int k = 0; k < 2; ++k) {
      const double r = ann_mesh.vertices()[e[k]].norm();
      CHECK((std::abs(r - 0.5) < 1e-12 || std::abs(r - 1.0) < 1e-12));
    }
  }
  CHECK(boundary_submesh(generate(CanonicalDomain::unit_cube(), 2)).components == 1);
}

TEST_CASE("refinement", "[mesh]") {
  auto sq = generate(CanonicalDomain::unit_square(), 1);
  auto fine = refine(sq);
  CHECK(fine.num_simplices(2) == 8);
  CHECK(fine.euler_characteristic() == sq.euler_characteristic());
  CHECK(fine.max_edge_length() == Catch::Approx(0.5 * sq.max_edge_length()).epsilon(1e-12));

  for (int r : {1, 3}) {
    CHECK(same_vertex_sets(refine(generate(CanonicalDomain::unit_square(), r)),
                           generate(CanonicalDomain::unit_square(), 2 * r)));
    CHECK(same_vertex_sets(refine(generate(CanonicalDomain::unit_cube(), r)),
                           generate(CanonicalDomain::unit_cube(), 2 * r)));
  }
  auto cube = refine(generate(CanonicalDomain::unit_cube(), 2));
  CHECK(cube.euler_characteristic() == 1);
  CHECK(cube.total_volume() == Catch::Approx(1.0).epsilon(1e-12));
  auto ann = generate(CanonicalDomain::annulus(0.5, 1.0), 6);
  CHECK(refine(ann).euler_characteristic() == 0);
}

TEST_CASE("incidence and orientation invariants", "[mesh]") {
  for (const auto& mesh : {generate(CanonicalDomain::unit_square(), 5), generate(CanonicalDomain::disk(1.0), 6),
                           generate(CanonicalDomain::annulus(0.5, 1.0), 6), generate(CanonicalDomain::l_shape(), 4),
                           generate(CanonicalDomain::unit_cube(), 3)}) {
    const int n = mesh.dim();
    for (int p = 0; p + 1 < n; ++p) {
      SparseMatrix dd = coboundary_matrix(mesh, p + 1).matrix * coboundary_matrix(mesh, p).matrix;
      CHECK(dd.norm() == 0.0);
    }
    // Sum over cells of orientation times incidence: 0 on interior faces, +-1 on the boundary.
    const SparseMatrix top = coboundary_matrix(mesh, n - 1).matrix;
    Eigen::VectorXd orient(mesh.num_simplices(n));
    for (int c = 0; c < orient.size(); ++c) orient[c] = mesh.cell_orientation(c);
    const Eigen::VectorXd induced = top.transpose() * orient;
    const auto& bnd = mesh.on_boundary(n - 1);
    bool ok = true;
    for (int f = 0; f < induced.size(); ++f) ok = ok && std::abs(induced[f]) == (bnd[f] ? 1.0 : 0.0);
    CHECK(ok);
    // Incident-cell count per face.
    Eigen::VectorXd count = top.cwiseAbs().transpose() * Eigen::VectorXd::Ones(top.rows());
    ok = true;
    for (int f = 0; f < count.size(); ++f) ok = ok && count[f] == (bnd[f] ? 1.0 : 2.0);
    CHECK(ok);
  }
}

TEST_CASE("mesh text round trip", "[mesh]") {
  auto sq = generate(CanonicalDomain::unit_square(), 1);
  const std::string text = write_mesh(sq);
  auto back = read_mesh(text);
  CHECK(write_mesh(back) == text);
  CHECK(back.cells() == sq.cells());
  CHECK(mesh_hash(back) == mesh_hash(sq));
  CHECK(mesh_hash(generate(CanonicalDomain::unit_square(), 2)) != mesh_hash(sq));

  auto cube = generate(CanonicalDomain::unit_cube(), 2);
  CHECK(write_mesh(read_mesh(write_mesh(cube))) == write_mesh(cube));
}

TEST_CASE("mesh parse errors", "[mesh]") {
  const std::string short_vertices =
      "# five vertices declared, four given\n"
      "2 5 2\n"
      "0 0\n"
      "1 0\n"
      "1 1\n"
      "0 1\n"
      "0 1 2\n"
      "0 2 3\n";
  try {
    read_mesh(short_vertices);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
  }

  const std::string bad_index =
      "2 4 2\n"
      "0 0\n1 0\n1 1\n0 1\n"
      "0 1 2\n"
      "0 2 99\n";
  try {
    read_mesh(bad_index);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
    CHECK(std::string(e.what()).find("99") != std::string::npos);
  }

  CHECK_THROWS_AS(read_mesh(""), ParseError);
  CHECK_THROWS_AS(read_mesh("4 1 1\n"), ParseError);
  CHECK_THROWS_AS(read_mesh("2 3 1\n0 0\n1 0\n0 1\n0 1 1\n"), ParseError);
  // Three triangles sharing edge 0-1.
  const std::string fan =
      "2 5 3\n0 0\n1 0\n0 1\n0 -1\n1 1\n"
      "0 1 2\n0 1 3\n0 1 4\n";
  try {
    read_mesh(fan);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 9);
  }
}
