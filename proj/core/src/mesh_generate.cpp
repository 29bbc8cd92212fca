#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "hodgelab/errors.hpp"
#include "hodgelab/mesh.hpp"

namespace hodgelab {

namespace {

struct Builder {
  std::vector<Point> vertices;
  std::vector<Simplex> cells;

  int add(double x, double y, double z = 0.0) {
    vertices.emplace_back(x, y, z);
    return static_cast<int>(vertices.size()) - 1;
  }
  void tri(int a, int b, int c) { cells.push_back(make_simplex({a, b, c})); }
  void tet(int a, int b, int c, int d) { cells.push_back(make_simplex({a, b, c, d})); }
};

// Structured grid of nx*ny cells on [x0,x0+w]x[y0,y0+h]; every quad is cut
// along its (lower-left, upper-right) diagonal. `keep` filters cells by center.
template <typename Keep>
SimplicialComplex grid(int nx, int ny, double x0, double y0, double w, double h, Keep keep) {
  Builder b;
  std::vector<int> id((nx + 1) * (ny + 1), -1);
  auto vertex = [&](int i, int j) {
    int& slot = id[j * (nx + 1) + i];
    if (slot < 0) slot = b.add(x0 + w * i / nx, y0 + h * j / ny);
    return slot;
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double cx = x0 + w * (i + 0.5) / nx;
      const double cy = y0 + h * (j + 0.5) / ny;
      if (!keep(cx, cy)) continue;
      const int v00 = vertex(i, j), v10 = vertex(i + 1, j);
      const int v01 = vertex(i, j + 1), v11 = vertex(i + 1, j + 1);
      b.tri(v00, v10, v11);
      b.tri(v00, v11, v01);
    }
  }
  return SimplicialComplex(2, std::move(b.vertices), std::move(b.cells));
}

struct Ring {
  std::vector<int> ids;
  std::vector<double> angles;  // ascending, starting at ring offset in [0, 2pi)
};

Ring make_ring(Builder& b, double radius, int count, double offset = 0.0) {
  Ring r;
  for (int k = 0; k < count; ++k) {
    const double t = offset + 2.0 * M_PI * k / count;
    r.ids.push_back(b.add(radius * std::cos(t), radius * std::sin(t)));
    r.angles.push_back(t);
  }
  return r;
}

// Triangulates the band between two closed rings by merging their angular
// sequences; produces |inner| + |outer| triangles.
void stitch(Builder& b, const Ring& inner, const Ring& outer) {
  const int a = static_cast<int>(inner.ids.size());
  const int c = static_cast<int>(outer.ids.size());
  auto angle = [](const Ring& r, int k) {
    const int n = static_cast<int>(r.ids.size());
    return r.angles[k % n] + 2.0 * M_PI * (k / n);
  };
  int i = 0, j = 0;
  while (i < a || j < c) {
    const bool advance_inner = j == c || (i < a && angle(inner, i + 1) <= angle(outer, j + 1) + 1e-12);
    if (advance_inner) {
      b.tri(inner.ids[i % a], inner.ids[(i + 1) % a], outer.ids[j % c]);
      ++i;
    } else {
      b.tri(inner.ids[i % a], outer.ids[j % c], outer.ids[(j + 1) % c]);
      ++j;
    }
  }
}

SimplicialComplex disk(double radius, int res) {
  Builder b;
  const int center = b.add(0.0, 0.0);
  Ring previous;
  for (int k = 1; k <= res; ++k) {
    Ring ring = make_ring(b, radius * k / res, 6 * k);
    if (k == 1) {
      for (int s = 0; s < 6; ++s) b.tri(center, ring.ids[s], ring.ids[(s + 1) % 6]);
    } else {
      stitch(b, previous, ring);
    }
    previous = std::move(ring);
  }
  return SimplicialComplex(2, std::move(b.vertices), std::move(b.cells));
}

SimplicialComplex annulus(double inner, double outer, int res) {
  Builder b;
  const double dr = (outer - inner) / res;
  const int count = std::max(8, static_cast<int>(std::ceil(M_PI * (inner + outer) / dr)));
  Ring previous = make_ring(b, inner, count);
  for (int k = 1; k <= res; ++k) {
    Ring ring = make_ring(b, inner + dr * k, count);
    stitch(b, previous, ring);
    previous = std::move(ring);
  }
  return SimplicialComplex(2, std::move(b.vertices), std::move(b.cells));
}

// Each grid cube is split into the six tetrahedra along its main diagonal.
SimplicialComplex cube(int res) {
  Builder b;
  const int m = res + 1;
  for (int k = 0; k <= res; ++k)
    for (int j = 0; j <= res; ++j)
      for (int i = 0; i <= res; ++i)
        b.add(static_cast<double>(i) / res, static_cast<double>(j) / res, static_cast<double>(k) / res);
  auto id = [m](int i, int j, int k) { return (k * m + j) * m + i; };
  std::array<int, 3> axes{0, 1, 2};
  std::vector<std::array<int, 3>> perms;
  do perms.push_back(axes);
  while (std::next_permutation(axes.begin(), axes.end()));

  for (int k = 0; k < res; ++k) {
    for (int j = 0; j < res; ++j) {
      for (int i = 0; i < res; ++i) {
        for (const auto& perm : perms) {
          std::array<int, 3> at{i, j, k};
          std::array<int, 4> path{};
          path[0] = id(at[0], at[1], at[2]);
          for (int s = 0; s < 3; ++s) {
            ++at[perm[s]];
            path[s + 1] = id(at[0], at[1], at[2]);
          }
          b.tet(path[0], path[1], path[2], path[3]);
        }
      }
    }
  }
  return SimplicialComplex(3, std::move(b.vertices), std::move(b.cells));
}

}  // namespace

SimplicialComplex generate(const CanonicalDomain& domain, int resolution) {
  domain.validate();
  if (resolution < 1) throw ParameterError("resolution must be >= 1");
  const auto all = [](double, double) { return true; };

  auto mesh = [&]() -> SimplicialComplex {
    using Kind = CanonicalDomain::Kind;
    switch (domain.kind) {
      case Kind::UnitSquare:
        return grid(resolution, resolution, 0.0, 0.0, 1.0, 1.0, all);
      case Kind::Rectangle: {
        const double longest = std::max(domain.a, domain.b);
        const int nx = std::max(1, static_cast<int>(std::lround(resolution * domain.a / longest)));
        const int ny = std::max(1, static_cast<int>(std::lround(resolution * domain.b / longest)));
        return grid(nx, ny, 0.0, 0.0, domain.a, domain.b, all);
      }
      case Kind::Disk:
        return disk(domain.outer, resolution);
      case Kind::Annulus:
        return annulus(domain.inner, domain.outer, resolution);
      case Kind::LShape:
        // [-1,1]^2 without the quadrant x > 0, y < 0; re-entrant corner at the origin.
        return grid(2 * resolution, 2 * resolution, -1.0, -1.0, 2.0, 2.0,
                    [](double x, double y) { return !(x > 0.0 && y < 0.0); });
      case Kind::UnitCube:
        return cube(resolution);
    }
    throw ParameterError("unknown domain");
  }();
  mesh.set_provenance({domain, resolution});
  return mesh;
}

SimplicialComplex refine(const SimplicialComplex& complex) {
  const int n = complex.dim();
  std::vector<Point> vertices = complex.vertices();
  const int nv = static_cast<int>(vertices.size());
  for (const auto& e : complex.skeleton(1)) vertices.push_back(0.5 * (vertices[e[0]] + vertices[e[1]]));
  auto mid = [&](int a, int b) { return nv + *complex.find(1, make_simplex({a, b})); };

  std::vector<Simplex> cells;
  for (const auto& c : complex.cells()) {
    if (n == 2) {
      const int a = c[0], b = c[1], d = c[2];
      const int ab = mid(a, b), bd = mid(b, d), ad = mid(a, d);
      cells.push_back(make_simplex({a, ab, ad}));
      cells.push_back(make_simplex({ab, b, bd}));
      cells.push_back(make_simplex({ad, bd, d}));
      cells.push_back(make_simplex({ab, bd, ad}));
    } else {
      const int x0 = c[0], x1 = c[1], x2 = c[2], x3 = c[3];
      const int m01 = mid(x0, x1), m02 = mid(x0, x2), m03 = mid(x0, x3);
      const int m12 = mid(x1, x2), m13 = mid(x1, x3), m23 = mid(x2, x3);
      cells.push_back(make_simplex({x0, m01, m02, m03}));
      cells.push_back(make_simplex({m01, x1, m12, m13}));
      cells.push_back(make_simplex({m02, m12, x2, m23}));
      cells.push_back(make_simplex({m03, m13, m23, x3}));
      // Octahedron cut along the m02-m13 diagonal.
      cells.push_back(make_simplex({m01, m02, m03, m13}));
      cells.push_back(make_simplex({m01, m02, m12, m13}));
      cells.push_back(make_simplex({m02, m03, m13, m23}));
      cells.push_back(make_simplex({m02, m12, m13, m23}));
    }
  }
  SimplicialComplex out(n, std::move(vertices), std::move(cells));
  if (const auto& prov = complex.provenance()) out.set_provenance({prov->domain, 2 * prov->resolution});
  return out;
}

}  // namespace hodgelab
