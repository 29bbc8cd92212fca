#include "hodgelab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/LU>

#include "hodgelab/errors.hpp"
#include "local_subsets.hpp"

namespace hodgelab {

Simplex make_simplex(std::initializer_list<int> vertices) {
  Simplex s{-1, -1, -1, -1};
  std::copy(vertices.begin(), vertices.end(), s.begin());
  std::sort(s.begin(), s.begin() + static_cast<long>(vertices.size()));
  return s;
}

int simplex_size(const Simplex& s) {
  return static_cast<int>(std::count_if(s.begin(), s.end(), [](int v) { return v >= 0; }));
}

CanonicalDomain CanonicalDomain::rectangle(double a, double b) {
  CanonicalDomain d{Kind::Rectangle};
  d.a = a;
  d.b = b;
  d.validate();
  return d;
}

CanonicalDomain CanonicalDomain::disk(double radius) {
  CanonicalDomain d{Kind::Disk};
  d.outer = radius;
  d.validate();
  return d;
}

CanonicalDomain CanonicalDomain::annulus(double inner, double outer) {
  CanonicalDomain d{Kind::Annulus};
  d.inner = inner;
  d.outer = outer;
  d.validate();
  return d;
}

void CanonicalDomain::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  switch (kind) {
    case Kind::Rectangle:
      if (!positive(a) || !positive(b)) throw ParameterError("rectangle sides must be positive");
      break;
    case Kind::Disk:
      if (!positive(outer)) throw ParameterError("disk radius must be positive");
      break;
    case Kind::Annulus:
      if (!positive(inner) || !positive(outer)) throw ParameterError("annulus radii must be positive");
      if (!(inner < outer)) throw ParameterError("annulus requires r < R");
      break;
    default:
      break;
  }
}

double CanonicalDomain::area_or_volume() const {
  switch (kind) {
    case Kind::UnitSquare: return 1.0;
    case Kind::Rectangle: return a * b;
    case Kind::Disk: return M_PI * outer * outer;
    case Kind::Annulus: return M_PI * (outer * outer - inner * inner);
    case Kind::LShape: return 3.0;
    case Kind::UnitCube: return 1.0;
  }
  return 0.0;
}

std::string CanonicalDomain::tag() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::UnitSquare: os << "square"; break;
    case Kind::Rectangle: os << "rectangle(a=" << a << ",b=" << b << ")"; break;
    case Kind::Disk: os << "disk(R=" << outer << ")"; break;
    case Kind::Annulus: os << "annulus(r=" << inner << ",R=" << outer << ")"; break;
    case Kind::LShape: os << "lshape"; break;
    case Kind::UnitCube: os << "cube"; break;
  }
  return os.str();
}

SimplicialComplex::SimplicialComplex(int dim, std::vector<Point> vertices, std::vector<Simplex> cells)
    : dim_(dim), vertices_(std::move(vertices)) {
  if (dim != 2 && dim != 3) throw ParameterError("complex dimension must be 2 or 3");
  const int nv = static_cast<int>(vertices_.size());

  for (auto& c : cells) {
    for (int k = 0; k <= dim; ++k) {
      if (c[k] < 0 || c[k] >= nv) throw ParameterError("cell references vertex " + std::to_string(c[k]) +
                                                       " of " + std::to_string(nv));
    }
    for (int k = dim + 1; k < 4; ++k) c[k] = -1;
    std::sort(c.begin(), c.begin() + dim + 1);
    if (std::adjacent_find(c.begin(), c.begin() + dim + 1) != c.begin() + dim + 1) {
      throw ParameterError("cell with repeated vertex");
    }
  }

  skeletons_[0].reserve(nv);
  for (int v = 0; v < nv; ++v) skeletons_[0].push_back({v, -1, -1, -1});

  for (int p = 1; p <= dim; ++p) {
    const auto& subsets = detail::local_subsets(dim, p);
    std::vector<Simplex> all;
    all.reserve(cells.size() * subsets.size());
    for (const auto& c : cells) {
      for (const auto& sub : subsets) {
        Simplex s{-1, -1, -1, -1};
        for (int k = 0; k <= p; ++k) s[k] = c[sub[k]];
        all.push_back(s);
      }
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    skeletons_[p] = std::move(all);
  }
  if (skeletons_[dim].size() != cells.size()) throw ParameterError("duplicate cell");
  // Cells keep their sorted lexicographic order; orientation follows that order.

  for (int p = 0; p < dim; ++p) {
    const auto& subsets = detail::local_subsets(dim, p);
    auto& faces = cell_faces_[p];
    faces.resize(skeletons_[dim].size() * subsets.size());
    for (std::size_t c = 0; c < skeletons_[dim].size(); ++c) {
      const auto& cell = skeletons_[dim][c];
      for (std::size_t l = 0; l < subsets.size(); ++l) {
        Simplex s{-1, -1, -1, -1};
        for (int k = 0; k <= p; ++k) s[k] = cell[subsets[l][k]];
        faces[c * subsets.size() + l] = *find(p, s);
      }
    }
  }
  cell_faces_[dim].resize(skeletons_[dim].size());
  std::iota(cell_faces_[dim].begin(), cell_faces_[dim].end(), 0);

  orientation_.resize(skeletons_[dim].size());
  for (std::size_t c = 0; c < skeletons_[dim].size(); ++c) {
    const auto& cell = skeletons_[dim][c];
    Eigen::Matrix3d e = Eigen::Matrix3d::Identity();
    for (int k = 1; k <= dim; ++k) e.col(k - 1) = vertices_[cell[k]] - vertices_[cell[0]];
    const double det = dim == 2 ? e.topLeftCorner<2, 2>().determinant() : e.determinant();
    orientation_[c] = det > 0 ? 1 : (det < 0 ? -1 : 0);
  }

  // Boundary faces: (dim-1)-simplices with exactly one incident cell.
  std::vector<int> incident(skeletons_[dim - 1].size(), 0);
  for (int f : cell_faces_[dim - 1]) ++incident[f];
  for (std::size_t f = 0; f < incident.size(); ++f) {
    if (incident[f] > 2) throw ParameterError("non-manifold face " + std::to_string(f));
  }
  for (int p = 0; p <= dim; ++p) boundary_[p].assign(skeletons_[p].size(), false);
  for (std::size_t f = 0; f < incident.size(); ++f) {
    if (incident[f] != 1) continue;
    boundary_[dim - 1][f] = true;
    const auto& face = skeletons_[dim - 1][f];
    for (int p = 0; p < dim - 1; ++p) {
      for (const auto& sub : detail::local_subsets(dim - 1, p)) {
        Simplex s{-1, -1, -1, -1};
        for (int k = 0; k <= p; ++k) s[k] = face[sub[k]];
        boundary_[p][*find(p, s)] = true;
      }
    }
  }
}

const std::vector<Simplex>& SimplicialComplex::skeleton(int p) const {
  if (p < 0 || p > dim_) throw ContractError("skeleton degree out of range");
  return skeletons_[p];
}

std::optional<int> SimplicialComplex::find(int p, Simplex s) const {
  if (p < 0 || p > dim_) return std::nullopt;
  std::sort(s.begin(), s.begin() + p + 1);
  for (int k = p + 1; k < 4; ++k) s[k] = -1;
  const auto& sk = skeletons_[p];
  auto it = std::lower_bound(sk.begin(), sk.end(), s);
  if (it == sk.end() || *it != s) return std::nullopt;
  return static_cast<int>(it - sk.begin());
}

int SimplicialComplex::faces_per_cell(int p) const {
  return static_cast<int>(detail::local_subsets(dim_, p).size());
}

int SimplicialComplex::cell_face(int p, int cell, int local) const {
  return cell_faces_[p][static_cast<std::size_t>(cell) * faces_per_cell(p) + local];
}

std::vector<int> SimplicialComplex::boundary_indices(int p) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < boundary_[p].size(); ++i)
    if (boundary_[p][i]) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> SimplicialComplex::interior_indices(int p) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < boundary_[p].size(); ++i)
    if (!boundary_[p][i]) out.push_back(static_cast<int>(i));
  return out;
}

int SimplicialComplex::euler_characteristic() const {
  int chi = 0;
  for (int p = 0; p <= dim_; ++p) chi += (p % 2 == 0 ? 1 : -1) * num_simplices(p);
  return chi;
}

double SimplicialComplex::max_edge_length() const {
  double h = 0.0;
  for (const auto& e : skeletons_[1]) h = std::max(h, (vertices_[e[1]] - vertices_[e[0]]).norm());
  return h;
}

double SimplicialComplex::total_volume() const {
  double vol = 0.0;
  const double fact = dim_ == 2 ? 2.0 : 6.0;
  for (const auto& cell : skeletons_[dim_]) {
    Eigen::Matrix3d e = Eigen::Matrix3d::Identity();
    for (int k = 1; k <= dim_; ++k) e.col(k - 1) = vertices_[cell[k]] - vertices_[cell[0]];
    vol += std::abs(dim_ == 2 ? e.topLeftCorner<2, 2>().determinant() : e.determinant()) / fact;
  }
  return vol;
}

std::string SimplicialComplex::domain_tag() const {
  return provenance_ ? provenance_->domain.tag() : std::string("mesh");
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int root(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[root(a)] = root(b); }
};

}  // namespace

BoundarySubmesh boundary_submesh(const SimplicialComplex& complex) {
  BoundarySubmesh out;
  const int n = complex.dim();
  for (int p = 0; p < n; ++p) out.simplices[p] = complex.boundary_indices(p);
  out.faces = out.simplices[n - 1];
  if (out.faces.empty()) return out;

  // Two boundary faces are connected when they share a (dim-2)-simplex.
  std::map<int, int> first_owner;
  UnionFind uf(static_cast<int>(out.faces.size()));
  const auto& faces = complex.skeleton(n - 1);
  for (std::size_t i = 0; i < out.faces.size(); ++i) {
    const auto& face = faces[out.faces[i]];
    for (const auto& sub : detail::local_subsets(n - 1, n - 2)) {
      Simplex s{-1, -1, -1, -1};
      for (int k = 0; k <= n - 2; ++k) s[k] = face[sub[k]];
      const int ridge = *complex.find(n - 2, s);
      auto [it, inserted] = first_owner.emplace(ridge, static_cast<int>(i));
      if (!inserted) uf.unite(static_cast<int>(i), it->second);
    }
  }
  for (std::size_t i = 0; i < out.faces.size(); ++i)
    if (uf.root(static_cast<int>(i)) == static_cast<int>(i)) ++out.components;
  return out;
}

}  // namespace hodgelab
