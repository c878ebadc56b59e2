#include "r13fem/forms.hpp"

#include <cmath>

#include "r13fem/error.hpp"
#include "r13fem/tensorops.hpp"

namespace r13 {

namespace {

// In-plane parts of the sigma basis tensors for the components xx, xy, yy.
constexpr double kSigmaBasis[3][2][2] = {{{1, 0}, {0, 0}}, {{0, 1}, {1, 0}}, {{0, 0}, {0, 1}}};

Tensor2 sigma_basis(int m) {
  return {{{kSigmaBasis[m][0][0], kSigmaBasis[m][0][1]}, {kSigmaBasis[m][1][0], kSigmaBasis[m][1][1]}}};
}

// Contractions of the lifted basis tensors, built from the tensor operators.
struct StressTables {
  double stf[3][2][3][2];  // stf(grad(E_m) in direction a) : stf(grad(E_n) in direction b)
  double mass[3][3];       // lift(E_m) : lift(E_n)
};

const StressTables& stress_tables() {
  static const StressTables tables = [] {
    StressTables t{};
    Tensor3 s[3][2];
    const Tensor3x3 zero{};
    for (int m = 0; m < 3; ++m) {
      const Tensor3x3 lifted = gen3d_tf2(sigma_basis(m));
      s[m][0] = stf3d3(grad3d_of_2(lifted, zero));
      s[m][1] = stf3d3(grad3d_of_2(zero, lifted));
    }
    for (int m = 0; m < 3; ++m) {
      for (int n = 0; n < 3; ++n) {
        t.mass[m][n] = inner2(gen3d_tf2(sigma_basis(m)), gen3d_tf2(sigma_basis(n)));
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) t.stf[m][a][n][b] = inner3(s[m][a], s[n][b]);
        }
      }
    }
    return t;
  }();
  return tables;
}

double component(Point p, int c) { return c == 0 ? p.x : p.y; }

TensorTrace basis_trace(int m, const EdgeFrame& f) {
  SymTensor2 s{kSigmaBasis[m][0][0], kSigmaBasis[m][0][1], kSigmaBasis[m][1][1]};
  return boundary_projection(s, f);
}

LocalMatrix make_local(std::vector<int> rows, std::vector<int> cols) {
  LocalMatrix m;
  m.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  m.rows = std::move(rows);
  m.cols = std::move(cols);
  return m;
}

}  // namespace

TensorTrace boundary_projection(const SymTensor2& s, const EdgeFrame& f) {
  const Point n = f.n, t = f.t;
  auto contract = [&](Point a, Point b) {
    return a.x * (s.xx * b.x + s.xy * b.y) + a.y * (s.xy * b.x + s.yy * b.y);
  };
  return {contract(n, n), contract(n, t), contract(t, t)};
}

VectorTrace boundary_projection(Point s, const EdgeFrame& f) { return {dot(s, f.n), dot(s, f.t)}; }

std::array<double, 2> edge_reference_point(const Mesh& mesh, int cell, int va, int vb, double t) {
  static constexpr double corners[3][2] = {{0, 0}, {1, 0}, {0, 1}};
  const auto& c = mesh.cells()[cell];
  for (int k = 0; k < 3; ++k) {
    const int a = c[k], b = c[(k + 1) % 3];
    if ((a == va && b == vb) || (a == vb && b == va)) {
      const double s = a == va ? t : 1.0 - t;
      const auto& p = corners[k];
      const auto& q = corners[(k + 1) % 3];
      return {p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])};
    }
  }
  throw MeshError("edge is not an edge of the given cell");
}

// Basis data of one degree at all quadrature points of a cell or edge.
struct FormKernels::CellEval {
  int n = 0;
  std::vector<std::array<double, 6>> phi;
  std::vector<std::array<Point, 6>> grad;
  std::vector<double> w;  // quadrature weight times measure
  std::vector<Point> x;
};

struct FormKernels::EdgeEval {
  int n = 0;
  std::vector<std::array<double, 6>> phi;
  std::vector<std::array<Point, 6>> grad;
  std::vector<double> w;
  std::vector<Point> x;
  EdgeFrame frame;
};

FormKernels::FormKernels(const MixedSpace& space, const ProblemData& data, int cell_degree, int edge_degree)
    : space_(space),
      data_(data),
      cell_rule_(triangle_quadrature(cell_degree)),
      edge_rule_(edge_quadrature(edge_degree)) {
  for (int d = 1; d <= 2; ++d) {
    const ReferenceElement& el = space_.element(d);
    auto& t = ref_[d - 1];
    for (const auto& q : cell_rule_.points) {
      t.values.push_back(el.values(q[0], q[1]));
      t.gradients.push_back(el.gradients(q[0], q[1]));
    }
  }
}

FormKernels::CellEval FormKernels::eval_cell(int cell, int degree) const {
  const CellGeometry g = space_.mesh().cell_geometry(cell);
  const auto& t = ref_[degree - 1];
  CellEval e;
  e.n = degree == 1 ? 3 : 6;
  const std::size_t nq = cell_rule_.weights.size();
  e.phi = t.values;
  e.grad.resize(nq);
  e.w.resize(nq);
  e.x.resize(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    for (int i = 0; i < e.n; ++i) e.grad[q][i] = physical_gradient(g, t.gradients[q][i]);
    e.w[q] = cell_rule_.weights[q] * 2.0 * g.area;
    const auto& r = cell_rule_.points[q];
    e.x[q] = {g.origin.x + g.jacobian[0][0] * r[0] + g.jacobian[0][1] * r[1],
              g.origin.y + g.jacobian[1][0] * r[0] + g.jacobian[1][1] * r[1]};
  }
  return e;
}

FormKernels::EdgeEval FormKernels::eval_edge(int cell, int va, int vb, int degree) const {
  const Mesh& mesh = space_.mesh();
  const CellGeometry g = mesh.cell_geometry(cell);
  const ReferenceElement& el = space_.element(degree);
  EdgeEval e;
  e.n = el.num_nodes();
  e.frame = mesh.edge_frame(va, vb, cell);
  const Point a = mesh.vertices()[va], b = mesh.vertices()[vb];
  const std::size_t nq = edge_rule_.weights.size();
  e.phi.resize(nq);
  e.grad.resize(nq);
  e.w.resize(nq);
  e.x.resize(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    const double t = edge_rule_.points[q][0];
    const auto r = edge_reference_point(mesh, cell, va, vb, t);
    e.phi[q] = el.values(r[0], r[1]);
    const auto dg = el.gradients(r[0], r[1]);
    for (int i = 0; i < e.n; ++i) e.grad[q][i] = physical_gradient(g, dg[i]);
    e.w[q] = edge_rule_.weights[q] * e.frame.length;
    e.x[q] = a + t * (b - a);
  }
  return e;
}

std::vector<int> FormKernels::cell_dofs(Field f, int cell) const {
  const int deg = space_.degree(f);
  int nodes[6];
  space_.cell_nodes(cell, deg, nodes);
  const int n = deg == 1 ? 3 : 6;
  std::vector<int> dofs;
  dofs.reserve(n * num_components(f));
  for (int c = 0; c < num_components(f); ++c) {
    const auto comp = static_cast<Component>(first_component(f) + c);
    for (int i = 0; i < n; ++i) dofs.push_back(space_.dof(comp, nodes[i]));
  }
  return dofs;
}

LocalMatrix FormKernels::a_cell(int cell) const {
  const double kn = data_.physics.kn;
  const CellEval e = eval_cell(cell, space_.degree(Field::s));
  LocalMatrix m = make_local(cell_dofs(Field::s, cell), cell_dofs(Field::s, cell));
  const int n = e.n;
  for (std::size_t q = 0; q < e.w.size(); ++q) {
    const double w = e.w[q];
    for (int ck = 0; ck < 2; ++ck) {
      for (int k = 0; k < n; ++k) {
        const Point gk = e.grad[q][k];
        for (int cj = 0; cj < 2; ++cj) {
          for (int j = 0; j < n; ++j) {
            const Point gj = e.grad[q][j];
            const double grad_grad = ck == cj ? dot(gk, gj) : 0.0;
            const double grad_gradt = component(gj, ck) * component(gk, cj);
            const double sym = 0.5 * (grad_grad + grad_gradt);
            const double div = component(gj, cj) * component(gk, ck);
            const double mass = ck == cj ? e.phi[q][j] * e.phi[q][k] : 0.0;
            m.values(ck * n + k, cj * n + j) +=
                w * (24.0 / 25.0 * kn * sym + 12.0 / 25.0 * kn * div + 4.0 / 15.0 / kn * mass);
          }
        }
      }
    }
  }
  return m;
}

LocalMatrix FormKernels::a_edge(const BoundaryEdge& be) const {
  const double chi = data_.chi_tilde(be.tag);
  const EdgeEval e = eval_edge(be.cell, be.v[0], be.v[1], space_.degree(Field::s));
  LocalMatrix m = make_local(cell_dofs(Field::s, be.cell), cell_dofs(Field::s, be.cell));
  const int n = e.n;
  const Point nn = e.frame.n, tt = e.frame.t;
  for (std::size_t q = 0; q < e.w.size(); ++q) {
    for (int ck = 0; ck < 2; ++ck) {
      for (int cj = 0; cj < 2; ++cj) {
        const double coef = 0.5 / chi * component(nn, ck) * component(nn, cj) +
                            12.0 / 25.0 * chi * component(tt, ck) * component(tt, cj);
        for (int k = 0; k < n; ++k) {
          for (int j = 0; j < n; ++j) {
            m.values(ck * n + k, cj * n + j) += e.w[q] * coef * e.phi[q][k] * e.phi[q][j];
          }
        }
      }
    }
  }
  return m;
}

LocalMatrix FormKernels::b_cell(int cell) const {
  const CellEval hi = eval_cell(cell, space_.degree(Field::s));
  const CellEval lo = eval_cell(cell, space_.degree(Field::theta));
  LocalMatrix m = make_local(cell_dofs(Field::theta, cell), cell_dofs(Field::s, cell));
  for (std::size_t q = 0; q < hi.w.size(); ++q) {
    for (int k = 0; k < lo.n; ++k) {
      for (int c = 0; c < 2; ++c) {
        for (int j = 0; j < hi.n; ++j) {
          m.values(k, c * hi.n + j) += hi.w[q] * lo.phi[q][k] * component(hi.grad[q][j], c);
        }
      }
    }
  }
  return m;
}

LocalMatrix FormKernels::c_cell(int cell) const {
  const CellEval s = eval_cell(cell, space_.degree(Field::s));
  const CellEval sg = eval_cell(cell, space_.degree(Field::sigma));
  LocalMatrix m = make_local(cell_dofs(Field::sigma, cell), cell_dofs(Field::s, cell));
  for (std::size_t q = 0; q < s.w.size(); ++q) {
    for (int mc = 0; mc < 3; ++mc) {
      for (int k = 0; k < sg.n; ++k) {
        for (int c = 0; c < 2; ++c) {
          for (int j = 0; j < s.n; ++j) {
            // psi : grad(s) with grad(s)_ab = d_b s_a
            const Point g = s.grad[q][j];
            const double contraction = kSigmaBasis[mc][c][0] * g.x + kSigmaBasis[mc][c][1] * g.y;
            m.values(mc * sg.n + k, c * s.n + j) += s.w[q] * 0.4 * sg.phi[q][k] * contraction;
          }
        }
      }
    }
  }
  return m;
}

LocalMatrix FormKernels::c_edge(const BoundaryEdge& be) const {
  const EdgeEval s = eval_edge(be.cell, be.v[0], be.v[1], space_.degree(Field::s));
  const EdgeEval sg = eval_edge(be.cell, be.v[0], be.v[1], space_.degree(Field::sigma));
  LocalMatrix m = make_local(cell_dofs(Field::sigma, be.cell), cell_dofs(Field::s, be.cell));
  const EdgeFrame& f = s.frame;
  for (int mc = 0; mc < 3; ++mc) {
    const TensorTrace tr = basis_trace(mc, f);
    for (int c = 0; c < 2; ++c) {
      const double coef = -3.0 / 20.0 * tr.nn * component(f.n, c) - 0.2 * tr.nt * component(f.t, c);
      for (std::size_t q = 0; q < s.w.size(); ++q) {
        for (int k = 0; k < sg.n; ++k) {
          for (int j = 0; j < s.n; ++j) {
            m.values(mc * sg.n + k, c * s.n + j) += s.w[q] * coef * sg.phi[q][k] * s.phi[q][j];
          }
        }
      }
    }
  }
  return m;
}

LocalMatrix FormKernels::d_cell(int cell) const { return d_cell(cell, StressWeights{}); }
LocalMatrix FormKernels::d_edge(const BoundaryEdge& be) const { return d_edge(be, StressWeights{}); }

LocalMatrix FormKernels::d_cell(int cell, const StressWeights& sw) const {
  const double kn = data_.physics.kn;
  const StressTables& t = stress_tables();
  const CellEval e = eval_cell(cell, space_.degree(Field::sigma));
  LocalMatrix m = make_local(cell_dofs(Field::sigma, cell), cell_dofs(Field::sigma, cell));
  const int n = e.n;
  const double c_stf = sw.stf_gradient * kn;
  const double c_mass = sw.mass / kn;
  for (std::size_t q = 0; q < e.w.size(); ++q) {
    const double w = e.w[q];
    for (int mk = 0; mk < 3; ++mk) {
      for (int k = 0; k < n; ++k) {
        const double gk[2] = {e.grad[q][k].x, e.grad[q][k].y};
        for (int mj = 0; mj < 3; ++mj) {
          for (int j = 0; j < n; ++j) {
            const double gj[2] = {e.grad[q][j].x, e.grad[q][j].y};
            double stf = 0.0;
            for (int a = 0; a < 2; ++a) {
              for (int b = 0; b < 2; ++b) stf += gj[a] * gk[b] * t.stf[mj][a][mk][b];
            }
            const double mass = t.mass[mj][mk] * e.phi[q][j] * e.phi[q][k];
            m.values(mk * n + k, mj * n + j) += w * (c_stf * stf + c_mass * mass);
          }
        }
      }
    }
  }
  return m;
}

LocalMatrix FormKernels::d_edge(const BoundaryEdge& be, const StressWeights& sw) const {
  const double chi = data_.chi_tilde(be.tag);
  const double eps = data_.bc(be.tag).epsilon_w;
  const EdgeEval e = eval_edge(be.cell, be.v[0], be.v[1], space_.degree(Field::sigma));
  LocalMatrix m = make_local(cell_dofs(Field::sigma, be.cell), cell_dofs(Field::sigma, be.cell));
  const int n = e.n;
  TensorTrace tr[3];
  for (int mc = 0; mc < 3; ++mc) tr[mc] = basis_trace(mc, e.frame);
  for (int mk = 0; mk < 3; ++mk) {
    for (int mj = 0; mj < 3; ++mj) {
      const TensorTrace& a = tr[mj];
      const TensorTrace& b = tr[mk];
      double coef = 0.0;
      if (sw.wall_terms) {
        coef += 9.0 / 8.0 * chi * a.nn * b.nn + chi * (a.tt + 0.5 * a.nn) * (b.tt + 0.5 * b.nn) + a.nt * b.nt / chi;
      }
      if (sw.inflow_term) coef += eps * chi * a.nn * b.nn;
      if (coef == 0.0) continue;
      for (std::size_t q = 0; q < e.w.size(); ++q) {
        for (int k = 0; k < n; ++k) {
          for (int j = 0; j < n; ++j) m.values(mk * n + k, mj * n + j) += e.w[q] * coef * e.phi[q][k] * e.phi[q][j];
        }
      }
    }
  }
  return m;
}

LocalMatrix FormKernels::e_cell(int cell) const {
  const CellEval sg = eval_cell(cell, space_.degree(Field::sigma));
  const CellEval u = eval_cell(cell, space_.degree(Field::u));
  LocalMatrix m = make_local(cell_dofs(Field::u, cell), cell_dofs(Field::sigma, cell));
  for (std::size_t q = 0; q < sg.w.size(); ++q) {
    for (int a = 0; a < 2; ++a) {
      for (int k = 0; k < u.n; ++k) {
        for (int mc = 0; mc < 3; ++mc) {
          for (int j = 0; j < sg.n; ++j) {
            const Point g = sg.grad[q][j];
            const double div_a = kSigmaBasis[mc][a][0] * g.x + kSigmaBasis[mc][a][1] * g.y;
            m.values(a * u.n + k, mc * sg.n + j) += sg.w[q] * u.phi[q][k] * div_a;
          }
        }
      }
    }
  }
  return m;
}

LocalMatrix FormKernels::f_edge(const BoundaryEdge& be) const {
  const double chi = data_.chi_tilde(be.tag);
  const double eps = data_.bc(be.tag).epsilon_w;
  const EdgeEval sg = eval_edge(be.cell, be.v[0], be.v[1], space_.degree(Field::sigma));
  const EdgeEval p = eval_edge(be.cell, be.v[0], be.v[1], space_.degree(Field::p));
  LocalMatrix m = make_local(cell_dofs(Field::p, be.cell), cell_dofs(Field::sigma, be.cell));
  if (eps == 0.0) return m;
  for (int mc = 0; mc < 3; ++mc) {
    const double nn = basis_trace(mc, sg.frame).nn;
    for (std::size_t q = 0; q < sg.w.size(); ++q) {
      for (int k = 0; k < p.n; ++k) {
        for (int j = 0; j < sg.n; ++j) {
          m.values(k, mc * sg.n + j) += sg.w[q] * eps * chi * nn * p.phi[q][k] * sg.phi[q][j];
        }
      }
    }
  }
  return m;
}

LocalMatrix FormKernels::g_cell(int cell) const {
  const CellEval p = eval_cell(cell, space_.degree(Field::p));
  const CellEval u = eval_cell(cell, space_.degree(Field::u));
  LocalMatrix m = make_local(cell_dofs(Field::p, cell), cell_dofs(Field::u, cell));
  for (std::size_t q = 0; q < p.w.size(); ++q) {
    for (int k = 0; k < p.n; ++k) {
      for (int a = 0; a < 2; ++a) {
        for (int j = 0; j < u.n; ++j) {
          m.values(k, a * u.n + j) += p.w[q] * u.phi[q][j] * component(p.grad[q][k], a);
        }
      }
    }
  }
  return m;
}

LocalMatrix FormKernels::h_edge(const BoundaryEdge& be) const {
  const double chi = data_.chi_tilde(be.tag);
  const double eps = data_.bc(be.tag).epsilon_w;
  const EdgeEval p = eval_edge(be.cell, be.v[0], be.v[1], space_.degree(Field::p));
  LocalMatrix m = make_local(cell_dofs(Field::p, be.cell), cell_dofs(Field::p, be.cell));
  if (eps == 0.0) return m;
  for (std::size_t q = 0; q < p.w.size(); ++q) {
    for (int k = 0; k < p.n; ++k) {
      for (int j = 0; j < p.n; ++j) m.values(k, j) += p.w[q] * eps * chi * p.phi[q][k] * p.phi[q][j];
    }
  }
  return m;
}

LocalMatrix FormKernels::jump_edge(const InteriorEdge& ie, Field f) const {
  if (f != Field::theta && f != Field::u && f != Field::p) throw Error("jump terms exist for theta, u and p only");
  const int deg = space_.degree(f);
  const EdgeEval l = eval_edge(ie.left, ie.v[0], ie.v[1], deg);
  const EdgeEval r = eval_edge(ie.right, ie.v[0], ie.v[1], deg);
  std::vector<int> dofs = cell_dofs(f, ie.left);
  const std::vector<int> right = cell_dofs(f, ie.right);
  dofs.insert(dofs.end(), right.begin(), right.end());
  LocalMatrix m = make_local(dofs, dofs);
  const int n = l.n;
  const int nc = num_components(f);
  const Point np = l.frame.n;
  // Jump of the normal derivative of each scalar basis function: left cell seen
  // with n+, right cell with n- = -n+.
  Eigen::VectorXd jump(2 * n);
  for (std::size_t q = 0; q < l.w.size(); ++q) {
    for (int i = 0; i < n; ++i) {
      jump(i) = dot(l.grad[q][i], np);
      jump(n + i) = -dot(r.grad[q][i], np);
    }
    const Eigen::MatrixXd local = l.w[q] * jump * jump.transpose();
    for (int c = 0; c < nc; ++c) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          m.values.block(a * nc * n + c * n, b * nc * n + c * n, n, n) += local.block(a * n, b * n, n, n);
        }
      }
    }
  }
  return m;
}

LocalMatrix FormKernels::cip_edge(const InteriorEdge& ie, Field f) const {
  LocalMatrix m = jump_edge(ie, f);
  const StabilizationParams& st = data_.stabilization;
  double delta = 0.0;
  int power = 3;
  switch (f) {
    case Field::theta: delta = st.delta_theta; break;
    case Field::u: delta = st.delta_u; break;
    default: delta = st.delta_p; power = 1; break;
  }
  if (!st.enabled) delta = 0.0;
  const Mesh& mesh = space_.mesh();
  const double h = 0.5 * (mesh.cell_geometry(ie.left).diameter + mesh.cell_geometry(ie.right).diameter);
  m.values *= delta * std::pow(h, power);
  return m;
}

LocalVector FormKernels::rhs_cell(int cell, Field f) const {
  LocalVector v;
  v.rows = cell_dofs(f, cell);
  v.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(v.rows.size()));
  const SourceData& src = data_.sources;
  if (f == Field::s || f == Field::sigma) return v;
  if (f == Field::theta && src.r.is_zero() && src.m_dot.is_zero()) return v;
  if (f == Field::u && src.b_x.is_zero() && src.b_y.is_zero()) return v;
  if (f == Field::p && src.m_dot.is_zero()) return v;
  const CellEval e = eval_cell(cell, space_.degree(f));
  for (std::size_t q = 0; q < e.w.size(); ++q) {
    const Point x = e.x[q];
    if (f == Field::theta) {
      const double val = src.r(x) - src.m_dot(x);
      for (int k = 0; k < e.n; ++k) v.values(k) += e.w[q] * val * e.phi[q][k];
    } else if (f == Field::u) {
      const double b[2] = {src.b_x(x), src.b_y(x)};
      for (int a = 0; a < 2; ++a) {
        for (int k = 0; k < e.n; ++k) v.values(a * e.n + k) += e.w[q] * b[a] * e.phi[q][k];
      }
    } else {
      const double val = src.m_dot(x);
      for (int k = 0; k < e.n; ++k) v.values(k) += e.w[q] * val * e.phi[q][k];
    }
  }
  return v;
}

LocalVector FormKernels::rhs_edge(const BoundaryEdge& be, Field f) const {
  LocalVector v;
  v.rows = cell_dofs(f, be.cell);
  v.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(v.rows.size()));
  if (f == Field::theta || f == Field::u) return v;
  const BoundaryData& bc = data_.bc(be.tag);
  const double chi = data_.chi_tilde(be.tag);
  const EdgeEval e = eval_edge(be.cell, be.v[0], be.v[1], space_.degree(f));
  const EdgeFrame& fr = e.frame;
  for (std::size_t q = 0; q < e.w.size(); ++q) {
    const Point x = e.x[q];
    if (f == Field::s) {
      const double th = bc.theta_w(x);
      for (int c = 0; c < 2; ++c) {
        for (int k = 0; k < e.n; ++k) v.values(c * e.n + k) -= e.w[q] * th * component(fr.n, c) * e.phi[q][k];
      }
    } else if (f == Field::sigma) {
      const double ut = bc.u_t_w(x);
      const double un_eff = bc.u_n_w(x) - bc.epsilon_w * chi * bc.p_w(x);
      for (int mc = 0; mc < 3; ++mc) {
        const TensorTrace tr = basis_trace(mc, fr);
        for (int k = 0; k < e.n; ++k) {
          v.values(mc * e.n + k) -= e.w[q] * (ut * tr.nt + un_eff * tr.nn) * e.phi[q][k];
        }
      }
    } else {
      const double un_eff = bc.u_n_w(x) - bc.epsilon_w * chi * bc.p_w(x);
      for (int k = 0; k < e.n; ++k) v.values(k) -= e.w[q] * un_eff * e.phi[q][k];
    }
  }
  return v;
}

namespace {

double quadratic(const LocalMatrix& m, const Eigen::VectorXd& u) {
  Eigen::VectorXd a(m.cols.size()), b(m.rows.size());
  for (std::size_t i = 0; i < m.cols.size(); ++i) a(i) = u(m.cols[i]);
  for (std::size_t i = 0; i < m.rows.size(); ++i) b(i) = u(m.rows[i]);
  return b.dot(m.values * a);
}

double energy(const FormKernels& k, const Eigen::VectorXd& u, const FormKernels::StressWeights& sw) {
  const MixedSpace& space = k.space();
  const Mesh& mesh = space.mesh();
  const ProblemData& data = k.data();
  if (u.size() != space.size()) throw Error("coefficient vector does not match the space");
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    total += quadratic(k.a_cell(c), u);
    total += quadratic(k.d_cell(c, sw), u);
  }
  FormKernels::StressWeights walls = sw;
  walls.inflow_term = false;
  const int dsig = space.degree(Field::sigma);
  const int dp = space.degree(Field::p);
  for (const auto& be : mesh.boundary_edges()) {
    total += quadratic(k.a_edge(be), u);
    total += quadratic(k.d_edge(be, walls), u);
    const double eps = data.bc(be.tag).epsilon_w;
    if (eps == 0.0) continue;
    // eps chi |p + sigma_nn|^2 evaluated pointwise
    const double chi = data.chi_tilde(be.tag);
    const EdgeFrame fr = mesh.edge_frame(be);
    const auto sdofs = k.cell_dofs(Field::sigma, be.cell);
    const auto pdofs = k.cell_dofs(Field::p, be.cell);
    const auto& rule = k.edge_rule();
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto r = edge_reference_point(mesh, be.cell, be.v[0], be.v[1], rule.points[q][0]);
      const auto phs = space.element(dsig).values(r[0], r[1]);
      const auto php = space.element(dp).values(r[0], r[1]);
      const int ns = dsig == 1 ? 3 : 6, np = dp == 1 ? 3 : 6;
      SymTensor2 s{0, 0, 0};
      for (int i = 0; i < ns; ++i) {
        s.xx += u(sdofs[i]) * phs[i];
        s.xy += u(sdofs[ns + i]) * phs[i];
        s.yy += u(sdofs[2 * ns + i]) * phs[i];
      }
      double p = 0.0;
      for (int i = 0; i < np; ++i) p += u(pdofs[i]) * php[i];
      const double tp = p + boundary_projection(s, fr).nn;
      total += rule.weights[q] * fr.length * eps * chi * tp * tp;
    }
  }
  for (const auto& ie : mesh.interior_edges()) {
    for (Field f : {Field::theta, Field::u, Field::p}) total += quadratic(k.cip_edge(ie, f), u);
  }
  return total;
}

}  // namespace

double stabilized_energy(const FormKernels& k, const Eigen::VectorXd& u) {
  return energy(k, u, FormKernels::StressWeights{});
}

double triple_norm_squared(const FormKernels& k, const Eigen::VectorXd& u) {
  FormKernels::StressWeights sw;
  sw.mass = 4.0 / 15.0;
  return energy(k, u, sw);
}

}  // namespace r13
