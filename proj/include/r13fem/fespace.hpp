#pragma once

#include <array>
#include <string>
#include <vector>

#include "r13fem/mesh.hpp"

namespace r13 {

/// Lagrange P1 or P2 element on the unit triangle.
///
/// Node order: vertices 0,1,2 at (0,0), (1,0), (0,1), then (P2 only) the
/// midpoints of the local edges k = (vertex k, vertex (k+1)%3).
class ReferenceElement {
 public:
  explicit ReferenceElement(int degree);

  int degree() const { return degree_; }
  int num_nodes() const { return degree_ == 1 ? 3 : 6; }
  std::array<double, 2> node(int i) const;

  /// Shape function values; entries past num_nodes() are zero.
  std::array<double, 6> values(double xi, double eta) const;
  /// Reference gradients d/dxi, d/deta.
  std::array<std::array<double, 2>, 6> gradients(double xi, double eta) const;

 private:
  int degree_;
};

/// The nine scalar components in global block order.
enum class Component { s_x, s_y, theta, sigma_xx, sigma_xy, sigma_yy, u_x, u_y, p };
inline constexpr int kNumComponents = 9;

/// Physical fields; each owns a contiguous run of components.
enum class Field { s, theta, sigma, u, p };
inline constexpr int kNumFields = 5;

const char* component_name(Component c);
const char* field_name(Field f);
Field field_from_name(const std::string& name);  // throws Error for unknown names
int first_component(Field f);
int num_components(Field f);

/// Global DOF layout of the mixed space (s, theta, sigma, u, p).
///
/// s and sigma use degree_high, theta, u and p use degree_low. Scalar nodes are
/// numbered vertices first, then (P2) one node per mesh edge. Component c occupies
/// [offset(c), offset(c) + num_scalar_nodes(degree(c))).
class MixedSpace {
 public:
  MixedSpace(MeshPtr mesh, int degree_high, int degree_low);

  const Mesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  int degree_high() const { return degree_high_; }
  int degree_low() const { return degree_low_; }

  int degree(Component c) const;
  int degree(Field f) const { return degree(static_cast<Component>(first_component(f))); }
  const ReferenceElement& element(Component c) const { return degree(c) == 1 ? p1_ : p2_; }
  const ReferenceElement& element(int degree) const { return degree == 1 ? p1_ : p2_; }

  int num_scalar_nodes(int degree) const;
  int offset(Component c) const { return offsets_[static_cast<int>(c)]; }
  int size() const { return offsets_[kNumComponents]; }
  /// Half-open global index range of a field.
  std::array<int, 2> range(Field f) const;

  /// Scalar node indices of a cell (3 or 6 entries).
  std::vector<int> cell_nodes(int cell, int degree) const;
  void cell_nodes(int cell, int degree, int* out) const;
  int dof(Component c, int scalar_node) const { return offset(c) + scalar_node; }

  /// Physical coordinates of all scalar nodes of the given degree.
  std::vector<Point> node_coordinates(int degree) const;

 private:
  MeshPtr mesh_;
  int degree_high_;
  int degree_low_;
  ReferenceElement p1_{1};
  ReferenceElement p2_{2};
  std::array<int, kNumComponents + 1> offsets_{};
};

/// Values and physical gradients of the scalar basis of one component on a cell.
struct BasisEval {
  std::vector<double> values;
  std::vector<Point> gradients;
};

BasisEval eval_basis(const MixedSpace& space, Component component, int cell, std::array<double, 2> ref_point);

/// Maps a reference gradient to physical space with the inverse transposed Jacobian.
inline Point physical_gradient(const CellGeometry& g, const std::array<double, 2>& ref) {
  const auto& m = g.inverse_jacobian_t;
  return {m[0][0] * ref[0] + m[0][1] * ref[1], m[1][0] * ref[0] + m[1][1] * ref[1]};
}

}  // namespace r13
