#include "r13fem/postproc.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "r13fem/error.hpp"
#include "r13fem/forms.hpp"
#include "r13fem/quadrature.hpp"

namespace r13 {

Solution::Solution(std::shared_ptr<const MixedSpace> space, Eigen::VectorXd coefficients)
    : space_(std::move(space)), x_(std::move(coefficients)) {
  if (!space_) throw Error("solution needs a space");
  if (x_.size() != space_->size()) throw Error("coefficient vector does not match the space");
}

double Solution::evaluate_in_cell(Component c, int cell, std::array<double, 2> ref) const {
  const int deg = space_->degree(c);
  int nodes[6];
  space_->cell_nodes(cell, deg, nodes);
  const auto v = space_->element(deg).values(ref[0], ref[1]);
  double r = 0.0;
  for (int i = 0; i < (deg == 1 ? 3 : 6); ++i) r += x_(space_->dof(c, nodes[i])) * v[i];
  return r;
}

Point Solution::gradient_in_cell(Component c, int cell, std::array<double, 2> ref) const {
  const int deg = space_->degree(c);
  int nodes[6];
  space_->cell_nodes(cell, deg, nodes);
  const auto g = space_->element(deg).gradients(ref[0], ref[1]);
  const CellGeometry geo = mesh().cell_geometry(cell);
  Point r{0.0, 0.0};
  for (int i = 0; i < (deg == 1 ? 3 : 6); ++i) r = r + x_(space_->dof(c, nodes[i])) * physical_gradient(geo, g[i]);
  return r;
}

std::array<double, 2> Solution::reference_coordinates(int cell, Point p) const {
  const auto l = mesh().barycentric(cell, p);
  return {l[1], l[2]};
}

double Solution::evaluate(Component c, Point p, int* hint) const {
  const int cell = mesh().locate(p, hint ? *hint : 0);
  if (hint) *hint = cell;
  return evaluate_in_cell(c, cell, reference_coordinates(cell, p));
}

std::array<double, kNumComponents> Solution::evaluate_all(Point p, int* hint) const {
  const int cell = mesh().locate(p, hint ? *hint : 0);
  if (hint) *hint = cell;
  const auto ref = reference_coordinates(cell, p);
  std::array<double, kNumComponents> out{};
  for (int c = 0; c < kNumComponents; ++c) out[c] = evaluate_in_cell(static_cast<Component>(c), cell, ref);
  return out;
}

namespace {

double node_normalizer(const Mesh& mesh, const ScalarFunction& f) {
  double m = 0.0;
  for (const auto& p : mesh.vertices()) m = std::max(m, std::abs(f(p)));
  return m;
}

Point map_to_cell(const CellGeometry& g, const std::array<double, 2>& r) {
  return {g.origin.x + g.jacobian[0][0] * r[0] + g.jacobian[0][1] * r[1],
          g.origin.y + g.jacobian[1][0] * r[0] + g.jacobian[1][1] * r[1]};
}

}  // namespace

double error_l2(const Solution& s, Component c, const ScalarFunction& reference, bool* absolute) {
  const Mesh& mesh = s.mesh();
  const QuadratureRule rule = triangle_quadrature(6);
  double sum = 0.0;
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    const CellGeometry g = mesh.cell_geometry(cell);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const double d = reference(map_to_cell(g, rule.points[q])) - s.evaluate_in_cell(c, cell, rule.points[q]);
      sum += rule.weights[q] * 2.0 * g.area * d * d;
    }
  }
  const double norm = node_normalizer(mesh, reference);
  if (absolute) *absolute = norm == 0.0;
  return norm == 0.0 ? std::sqrt(sum) : std::sqrt(sum) / norm;
}

double error_linf_nodes(const Solution& s, Component c, const ScalarFunction& reference, bool* absolute) {
  const Mesh& mesh = s.mesh();
  double m = 0.0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    m = std::max(m, std::abs(reference(mesh.vertices()[v]) - s.vertex_value(c, v)));
  }
  const double norm = node_normalizer(mesh, reference);
  if (absolute) *absolute = norm == 0.0;
  return norm == 0.0 ? m : m / norm;
}

ErrorReport compare(const Solution& s, const Solution& reference) {
  const Mesh& mesh = s.mesh();
  ErrorReport report;
  std::array<double, kNumComponents> norm{}, l2{}, linf{};
  int hint = 0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto r = reference.evaluate_all(mesh.vertices()[v], &hint);
    for (int c = 0; c < kNumComponents; ++c) {
      norm[c] = std::max(norm[c], std::abs(r[c]));
      linf[c] = std::max(linf[c], std::abs(r[c] - s.vertex_value(static_cast<Component>(c), v)));
    }
  }
  const QuadratureRule rule = triangle_quadrature(6);
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    const CellGeometry g = mesh.cell_geometry(cell);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto r = reference.evaluate_all(map_to_cell(g, rule.points[q]), &hint);
      const double w = rule.weights[q] * 2.0 * g.area;
      for (int c = 0; c < kNumComponents; ++c) {
        const double d = r[c] - s.evaluate_in_cell(static_cast<Component>(c), cell, rule.points[q]);
        l2[c] += w * d * d;
      }
    }
  }
  for (int c = 0; c < kNumComponents; ++c) {
    const double n = norm[c] > 0.0 ? norm[c] : 1.0;
    report.l2[c] = std::sqrt(l2[c]) / n;
    report.linf[c] = linf[c] / n;
  }
  return report;
}

double mass_flow(const Solution& s, int tag) {
  const Mesh& mesh = s.mesh();
  const QuadratureRule rule = edge_quadrature(6);
  double total = 0.0;
  bool found = false;
  for (const auto& be : mesh.boundary_edges()) {
    if (be.tag != tag) continue;
    found = true;
    const EdgeFrame f = mesh.edge_frame(be);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto r = edge_reference_point(mesh, be.cell, be.v[0], be.v[1], rule.points[q][0]);
      const double ux = s.evaluate_in_cell(Component::u_x, be.cell, r);
      const double uy = s.evaluate_in_cell(Component::u_y, be.cell, r);
      total += rule.weights[q] * f.length * (ux * f.n.x + uy * f.n.y);
    }
  }
  if (!found) throw Error("no boundary edges with tag " + std::to_string(tag));
  return total;
}

std::vector<ProfilePoint> line_sample(const Solution& s, Point p0, Point p1, int n_samples, Component c) {
  if (n_samples < 2) throw Error("line_sample needs at least two samples");
  std::vector<ProfilePoint> out;
  out.reserve(n_samples);
  const double len = norm(p1 - p0);
  int hint = 0;
  for (int i = 0; i < n_samples; ++i) {
    const double t = static_cast<double>(i) / (n_samples - 1);
    const Point x = p0 + t * (p1 - p0);
    out.push_back({t * len, x, s.evaluate(c, x, &hint)});
  }
  return out;
}

double trapezoid(const std::vector<ProfilePoint>& profile, const std::function<double(double)>& map) {
  double total = 0.0;
  for (std::size_t i = 1; i < profile.size(); ++i) {
    double a = profile[i - 1].value, b = profile[i].value;
    if (map) {
      a = map(a);
      b = map(b);
    }
    total += 0.5 * (a + b) * (profile[i].arc - profile[i - 1].arc);
  }
  return total;
}

std::vector<Extremum> extrema(const std::vector<ProfilePoint>& p) {
  std::vector<Extremum> out;
  const std::size_t n = p.size();
  if (n == 0) return out;
  if (n == 1) return {{p[0].arc, p[0].value, true}};
  out.push_back({p[0].arc, p[0].value, p[0].value > p[1].value});
  // Walk runs of equal values so plateaus count once, at their midpoint.
  std::size_t i = 1;
  while (i + 1 < n) {
    std::size_t j = i;
    while (j + 1 < n && p[j + 1].value == p[i].value) ++j;
    if (j + 1 >= n) break;
    const double prev = p[i - 1].value, next = p[j + 1].value, v = p[i].value;
    if ((v > prev && v > next) || (v < prev && v < next)) {
      out.push_back({0.5 * (p[i].arc + p[j].arc), v, v > prev});
    }
    i = j + 1;
  }
  out.push_back({p[n - 1].arc, p[n - 1].value, p[n - 1].value > p[n - 2].value});
  return out;
}

void write_vtk(const Solution& s, std::ostream& out) {
  const Mesh& mesh = s.mesh();
  char buf[96];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  out << "# vtk DataFile Version 3.0\nr13fem solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& p : mesh.vertices()) out << num(p.x) << ' ' << num(p.y) << " 0\n";
  out << "CELLS " << mesh.num_cells() << ' ' << 4 * mesh.num_cells() << "\n";
  for (const auto& c : mesh.cells()) out << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << "\n";
  out << "CELL_TYPES " << mesh.num_cells() << "\n";
  for (int i = 0; i < mesh.num_cells(); ++i) out << "5\n";
  out << "POINT_DATA " << mesh.num_vertices() << "\n";
  auto scalar = [&](const char* name, Component c) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < mesh.num_vertices(); ++v) out << num(s.vertex_value(c, v)) << "\n";
  };
  scalar("theta", Component::theta);
  scalar("p", Component::p);
  auto vector = [&](const char* name, Component cx, Component cy) {
    out << "VECTORS " << name << " double\n";
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      out << num(s.vertex_value(cx, v)) << ' ' << num(s.vertex_value(cy, v)) << " 0\n";
    }
  };
  vector("u", Component::u_x, Component::u_y);
  vector("s", Component::s_x, Component::s_y);
  out << "FIELD sigma_field 1\nsigma 6 " << mesh.num_vertices() << " double\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double xx = s.vertex_value(Component::sigma_xx, v);
    const double xy = s.vertex_value(Component::sigma_xy, v);
    const double yy = s.vertex_value(Component::sigma_yy, v);
    // xx yy zz xy yz xz
    out << num(xx) << ' ' << num(yy) << ' ' << num(-xx - yy) << ' ' << num(xy) << " 0 0\n";
  }
}

void write_vtk(const Solution& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_vtk(s, out);
  if (!out) throw Error("failed writing '" + path + "'");
}

void write_csv(const CsvTable& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << "\n";
  char buf[40];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.12g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
}

void write_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_csv(table, out);
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace r13
