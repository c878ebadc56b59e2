#include "r13fem/fespace.hpp"

#include "r13fem/error.hpp"

namespace r13 {

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
  if (degree != 1 && degree != 2) throw Error("unsupported element degree " + std::to_string(degree));
}

std::array<double, 2> ReferenceElement::node(int i) const {
  static constexpr double nodes[6][2] = {{0, 0}, {1, 0}, {0, 1}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}};
  return {nodes[i][0], nodes[i][1]};
}

std::array<double, 6> ReferenceElement::values(double xi, double eta) const {
  const double l[3] = {1.0 - xi - eta, xi, eta};
  if (degree_ == 1) return {l[0], l[1], l[2], 0.0, 0.0, 0.0};
  return {l[0] * (2 * l[0] - 1), l[1] * (2 * l[1] - 1), l[2] * (2 * l[2] - 1),
          4 * l[0] * l[1],       4 * l[1] * l[2],       4 * l[2] * l[0]};
}

std::array<std::array<double, 2>, 6> ReferenceElement::gradients(double xi, double eta) const {
  const double l[3] = {1.0 - xi - eta, xi, eta};
  static constexpr double dl[3][2] = {{-1, -1}, {1, 0}, {0, 1}};
  std::array<std::array<double, 2>, 6> g{};
  if (degree_ == 1) {
    for (int i = 0; i < 3; ++i) g[i] = {dl[i][0], dl[i][1]};
    return g;
  }
  for (int i = 0; i < 3; ++i) {
    const double f = 4 * l[i] - 1;
    g[i] = {f * dl[i][0], f * dl[i][1]};
  }
  for (int k = 0; k < 3; ++k) {
    const int a = k, b = (k + 1) % 3;
    g[3 + k] = {4 * (dl[a][0] * l[b] + l[a] * dl[b][0]), 4 * (dl[a][1] * l[b] + l[a] * dl[b][1])};
  }
  return g;
}

const char* component_name(Component c) {
  static constexpr const char* names[] = {"s_x", "s_y", "theta", "sigma_xx", "sigma_xy",
                                          "sigma_yy", "u_x", "u_y", "p"};
  return names[static_cast<int>(c)];
}

const char* field_name(Field f) {
  static constexpr const char* names[] = {"s", "theta", "sigma", "u", "p"};
  return names[static_cast<int>(f)];
}

Field field_from_name(const std::string& name) {
  for (int f = 0; f < kNumFields; ++f) {
    if (name == field_name(static_cast<Field>(f))) return static_cast<Field>(f);
  }
  throw Error("unknown field '" + name + "'");
}

int first_component(Field f) {
  static constexpr int first[] = {0, 2, 3, 6, 8};
  return first[static_cast<int>(f)];
}

int num_components(Field f) {
  static constexpr int n[] = {2, 1, 3, 2, 1};
  return n[static_cast<int>(f)];
}

MixedSpace::MixedSpace(MeshPtr mesh, int degree_high, int degree_low)
    : mesh_(std::move(mesh)), degree_high_(degree_high), degree_low_(degree_low) {
  if (!mesh_) throw Error("mixed space needs a mesh");
  for (int d : {degree_high, degree_low}) {
    if (d != 1 && d != 2) throw Error("unsupported element degree " + std::to_string(d));
  }
  if (degree_high < degree_low) throw Error("degree_high must not be smaller than degree_low");
  offsets_[0] = 0;
  for (int c = 0; c < kNumComponents; ++c) {
    offsets_[c + 1] = offsets_[c] + num_scalar_nodes(degree(static_cast<Component>(c)));
  }
}

int MixedSpace::degree(Component c) const {
  switch (c) {
    case Component::s_x:
    case Component::s_y:
    case Component::sigma_xx:
    case Component::sigma_xy:
    case Component::sigma_yy:
      return degree_high_;
    default:
      return degree_low_;
  }
}

int MixedSpace::num_scalar_nodes(int degree) const {
  return degree == 1 ? mesh_->num_vertices() : mesh_->num_vertices() + mesh_->num_edges();
}

std::array<int, 2> MixedSpace::range(Field f) const {
  const int c0 = first_component(f);
  return {offsets_[c0], offsets_[c0 + num_components(f)]};
}

void MixedSpace::cell_nodes(int cell, int degree, int* out) const {
  const auto& v = mesh_->cells()[cell];
  out[0] = v[0];
  out[1] = v[1];
  out[2] = v[2];
  if (degree == 2) {
    for (int k = 0; k < 3; ++k) out[3 + k] = mesh_->num_vertices() + mesh_->cell_edge(cell, k);
  }
}

std::vector<int> MixedSpace::cell_nodes(int cell, int degree) const {
  std::vector<int> out(degree == 1 ? 3 : 6);
  cell_nodes(cell, degree, out.data());
  return out;
}

std::vector<Point> MixedSpace::node_coordinates(int degree) const {
  std::vector<Point> x(mesh_->vertices());
  if (degree == 2) {
    for (const auto& e : mesh_->edges()) x.push_back(0.5 * (mesh_->vertices()[e[0]] + mesh_->vertices()[e[1]]));
  }
  return x;
}

BasisEval eval_basis(const MixedSpace& space, Component component, int cell, std::array<double, 2> ref_point) {
  const auto& el = space.element(component);
  const auto g = space.mesh().cell_geometry(cell);
  const auto v = el.values(ref_point[0], ref_point[1]);
  const auto dv = el.gradients(ref_point[0], ref_point[1]);
  BasisEval out;
  for (int i = 0; i < el.num_nodes(); ++i) {
    out.values.push_back(v[i]);
    out.gradients.push_back(physical_gradient(g, dv[i]));
  }
  return out;
}

}  // namespace r13
