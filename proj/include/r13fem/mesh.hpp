#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace r13 {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double norm(Point a);

/// Boundary segment as read from a mesh file or produced by a generator.
struct TaggedSegment {
  std::array<int, 2> v;
  int tag;
};

struct BoundaryEdge {
  std::array<int, 2> v;  // oriented along the owning cell's counter-clockwise boundary
  int cell;
  int tag;
  int edge;  // index into Mesh::edges()
};

/// Interior edge; `left` is the lower cell index and n+ is the outward normal of `left`.
struct InteriorEdge {
  std::array<int, 2> v;
  int left;
  int right;
  int edge;
};

/// Unit outward normal n, tangent t = (-n_y, n_x) and length of an edge seen from one cell.
struct EdgeFrame {
  Point n;
  Point t;
  double length;
};

/// Affine map x = x0 + J * (xi, eta) from the unit reference triangle.
struct CellGeometry {
  std::array<std::array<double, 2>, 2> jacobian;
  std::array<std::array<double, 2>, 2> inverse_jacobian_t;
  Point origin;
  double area;
  double diameter;  // longest edge
};

/// Immutable conforming triangle mesh with tagged boundary edges.
///
/// Cells are stored counter-clockwise. Local edge k of a cell joins its vertices
/// k and (k+1)%3. Every geometric edge has one entry in edges(); it is either a
/// boundary edge (one cell, one tag) or an interior edge (two cells).
class Mesh {
 public:
  /// Fixes the orientation of clockwise cells and builds the edge topology.
  /// Throws MeshError for repeated or collinear cell vertices, non-manifold edges,
  /// segments that do not coincide with a boundary edge, and untagged boundary edges.
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
       const std::vector<TaggedSegment>& boundary_segments);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& cells() const { return cells_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
  const std::vector<InteriorEdge>& interior_edges() const { return interior_edges_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /// Global edge index of local edge k of cell c.
  int cell_edge(int c, int k) const { return cell_edges_[c][k]; }
  /// Cell across local edge k of cell c, or -1 on the boundary.
  int neighbor(int c, int k) const { return neighbors_[c][k]; }

  /// Sorted list of distinct boundary tags.
  std::vector<int> tags() const;

  CellGeometry cell_geometry(int c) const;
  double signed_area(int c) const;

  /// Frame of the edge (a, b) seen from cell c; throws MeshError if the edge
  /// is degenerate or not an edge of c.
  EdgeFrame edge_frame(int a, int b, int c) const;
  EdgeFrame edge_frame(const BoundaryEdge& e) const { return edge_frame(e.v[0], e.v[1], e.cell); }

  /// Barycentric coordinates of p with respect to cell c.
  std::array<double, 3> barycentric(int c, Point p) const;

  /// Cell containing p (short walk from `hint`, then the bucket grid). If p lies outside
  /// the mesh the cell with the largest minimal barycentric coordinate is returned.
  int locate(Point p, int hint = 0) const;

  double max_edge_length() const;

 private:
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<std::array<int, 3>> neighbors_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<InteriorEdge> interior_edges_;

  // Uniform bucket grid over the bounding box for point location.
  void build_locator();
  int locate_in_grid(Point p) const;
  Point grid_min_{};
  double grid_dx_ = 1.0, grid_dy_ = 1.0;
  int grid_nx_ = 1, grid_ny_ = 1;
  std::vector<int> grid_start_;
  std::vector<int> grid_cells_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

// Generators --------------------------------------------------------------------

/// Structured triangulation of [0,width]x[0,height] with alternating diagonals.
/// Tags: 1 bottom, 2 right, 3 top, 4 left.
Mesh generate_rectangle(double width, double height, double target_h);

/// Ring between two circles centred at the origin; tag 1 inner, tag 2 outer.
/// Boundary vertices lie exactly on the circles.
Mesh generate_annulus(double r_inner, double r_outer, double target_h);

/// Racetrack channel: two half rings centred at (+-half_length, 0) joined by straight
/// channels of length 2*half_length. Tags 1..4 inner wall (right arc, top, left arc,
/// bottom), 5..8 outer wall in the same order.
Mesh generate_racetrack(double half_length, double r_inner, double r_outer, double target_h);

/// Square chamber [0,L]^2 with a square beam [d,d+l]^2 removed. Tag 1 chamber walls,
/// tag 2 beam walls. Grid lines are graded towards the beam corners and chamber walls
/// by `grading` (ratio between coarsest and finest spacing).
Mesh generate_beam_chamber(double chamber, double beam, double offset, double target_h,
                           double grading);

// File formats ------------------------------------------------------------------

/// Reads the Gmsh MSH 2.x ASCII subset: 2-node lines (physical tag) and 3-node triangles.
Mesh read_gmsh(const std::string& path);
Mesh read_gmsh(std::istream& in);
void write_gmsh(const Mesh& mesh, const std::string& path);
void write_gmsh(const Mesh& mesh, std::ostream& out);

/// Canonical plain-text dump with VERTICES, CELLS and BOUNDARY sections.
void write_mesh_dump(const Mesh& mesh, std::ostream& out);

}  // namespace r13
