#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace hodgelab {

/// Vertex list of a simplex of dimension <= 3, ascending, padded with -1.
using Simplex = std::array<int, 4>;

/// Coordinates are stored in 3-vectors; 2D meshes keep z = 0.
using Point = Eigen::Vector3d;

/// Test geometries.
struct CanonicalDomain {
  enum class Kind { UnitSquare, Rectangle, Disk, Annulus, LShape, UnitCube };

  Kind kind = Kind::UnitSquare;
  double a = 1.0;        // rectangle width
  double b = 1.0;        // rectangle height
  double inner = 0.5;    // annulus inner radius
  double outer = 1.0;    // disk / annulus outer radius

  static CanonicalDomain unit_square() { return {Kind::UnitSquare}; }
  static CanonicalDomain rectangle(double a, double b);
  static CanonicalDomain disk(double radius);
  static CanonicalDomain annulus(double inner, double outer);
  static CanonicalDomain l_shape() { return {Kind::LShape}; }
  static CanonicalDomain unit_cube() { return {Kind::UnitCube}; }

  /// Throws ParameterError on r >= R or non-positive extents.
  void validate() const;

  int dim() const { return kind == Kind::UnitCube ? 3 : 2; }
  double area_or_volume() const;
  bool simply_connected() const { return kind != Kind::Annulus; }
  /// True for domains whose boundary is smooth or a flat-sided box.
  bool convex() const { return kind != Kind::Annulus && kind != Kind::LShape; }

  /// Short tag used in reports ("square", "disk(R=1)", ...).
  std::string tag() const;
};

/// Oriented simplicial complex of dimension 2 or 3.
///
/// Every simplex is stored with ascending vertex indices; that ordering is its
/// orientation. `cell_orientation(c)` records whether the sorted vertex order
/// of cell c agrees (+1) or disagrees (-1) with the ambient orientation.
class SimplicialComplex {
 public:
  /// Builds all skeletons from top-dimensional cells. Throws ParameterError for
  /// out-of-range indices, repeated vertices inside a cell, or a (dim-1)-face
  /// shared by more than two cells.
  SimplicialComplex(int dim, std::vector<Point> vertices, std::vector<Simplex> cells);

  int dim() const { return dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Simplex>& cells() const { return skeletons_[dim_]; }

  const std::vector<Simplex>& skeleton(int p) const;
  int num_simplices(int p) const { return static_cast<int>(skeleton(p).size()); }

  /// Index of a simplex in skeleton(p); vertices need not be sorted.
  std::optional<int> find(int p, Simplex s) const;

  /// Global index of the `local`-th p-face of cell c. Local faces are listed
  /// in lexicographic order of their positions inside the sorted cell.
  int cell_face(int p, int cell, int local) const;
  int faces_per_cell(int p) const;

  int cell_orientation(int cell) const { return orientation_[cell]; }

  /// Flags for p-simplices lying in the boundary.
  const std::vector<bool>& on_boundary(int p) const { return boundary_[p]; }
  std::vector<int> boundary_indices(int p) const;
  std::vector<int> interior_indices(int p) const;

  int euler_characteristic() const;
  double max_edge_length() const;
  double total_volume() const;

  /// Generator provenance; lets 3D refinement regenerate.
  struct Provenance {
    CanonicalDomain domain;
    int resolution = 0;
  };
  const std::optional<Provenance>& provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = p; }

  /// Human-readable domain tag, "mesh" for loaded meshes.
  std::string domain_tag() const;

 private:
  int dim_;
  std::vector<Point> vertices_;
  std::array<std::vector<Simplex>, 4> skeletons_;
  std::array<std::vector<int>, 4> cell_faces_;
  std::vector<int> orientation_;
  std::array<std::vector<bool>, 4> boundary_;
  std::optional<Provenance> provenance_;
};

/// Makes a simplex with ascending vertices, padded with -1.
Simplex make_simplex(std::initializer_list<int> vertices);
int simplex_size(const Simplex& s);

/// Mesh for a canonical domain. h ~ diameter / resolution; curved boundaries
/// are inscribed polygons with O(resolution) boundary vertices.
SimplicialComplex generate(const CanonicalDomain& domain, int resolution);

struct BoundarySubmesh {
  std::vector<int> faces;                         // (dim-1)-simplices on the boundary
  std::array<std::vector<int>, 4> simplices;      // p-simplices on the boundary
  int components = 0;
};

BoundarySubmesh boundary_submesh(const SimplicialComplex& complex);

/// 2D: 1:4 edge-midpoint subdivision. 3D: 1:8 subdivision (four corner
/// tetrahedra plus the inner octahedron cut along one diagonal).
SimplicialComplex refine(const SimplicialComplex& complex);

SimplicialComplex read_mesh(std::string_view text);
std::string write_mesh(const SimplicialComplex& complex);

/// FNV-1a of the canonical text form; used as report provenance.
std::uint64_t mesh_hash(const SimplicialComplex& complex);

}  // namespace hodgelab
