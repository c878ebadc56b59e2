#pragma once

#include <Eigen/Dense>
#include <vector>

#include "r13fem/fespace.hpp"
#include "r13fem/problem.hpp"
#include "r13fem/quadrature.hpp"

namespace r13 {

/// Normal/tangential components of a symmetric 2D tensor on an edge.
struct TensorTrace {
  double nn, nt, tt;
};
/// Normal/tangential components of a 2D vector on an edge.
struct VectorTrace {
  double n, t;
};

/// Symmetric in-plane tensor by its independent components.
struct SymTensor2 {
  double xx, xy, yy;
};

TensorTrace boundary_projection(const SymTensor2& sigma, const EdgeFrame& frame);
VectorTrace boundary_projection(Point s, const EdgeFrame& frame);

/// Local matrices on a cell or edge together with the global DOFs of their rows and columns.
struct LocalMatrix {
  std::vector<int> rows;
  std::vector<int> cols;
  Eigen::MatrixXd values;
};

struct LocalVector {
  std::vector<int> rows;
  Eigen::VectorXd values;
};

/// Element and edge kernels of the sub-functionals a..h, the interior penalty terms
/// and the right-hand sides l1..l5.
///
/// Local DOFs of a field are ordered component-major: all nodes of the first
/// component, then all nodes of the second, and so on. Every matrix uses the
/// convention M[k][j] = form(trial basis j, test basis k) with the argument roles
/// below:
///   A: a(s_j, r_k)        rows s,     cols s
///   B: b(kappa_k, s_j)    rows theta, cols s
///   C: c(s_j, psi_k)      rows sigma, cols s
///   D: d(sigma_j, psi_k)  rows sigma, cols sigma
///   E: e(v_k, sigma_j)    rows u,     cols sigma
///   F: f(q_k, sigma_j)    rows p,     cols sigma
///   G: g(q_k, u_j)        rows p,     cols u
///   H: h(p_j, q_k)        rows p,     cols p
class FormKernels {
 public:
  FormKernels(const MixedSpace& space, const ProblemData& data, int cell_degree = 6, int edge_degree = 6);

  const MixedSpace& space() const { return space_; }
  const ProblemData& data() const { return data_; }

  std::vector<int> cell_dofs(Field f, int cell) const;

  LocalMatrix a_cell(int cell) const;
  LocalMatrix a_edge(const BoundaryEdge& e) const;
  LocalMatrix b_cell(int cell) const;
  LocalMatrix c_cell(int cell) const;
  LocalMatrix c_edge(const BoundaryEdge& e) const;
  LocalMatrix d_cell(int cell) const;
  LocalMatrix d_edge(const BoundaryEdge& e) const;
  LocalMatrix e_cell(int cell) const;
  LocalMatrix f_edge(const BoundaryEdge& e) const;
  LocalMatrix g_cell(int cell) const;
  LocalMatrix h_edge(const BoundaryEdge& e) const;

  /// Interior penalty on the normal-gradient jump of a scalar or vector field
  /// (theta, u or p) with weight delta * h^k, h the mean diameter of both cells.
  /// Rows and columns list the left cell's DOFs followed by the right cell's.
  LocalMatrix cip_edge(const InteriorEdge& e, Field f) const;
  /// Same kernel with unit weight and no h scaling.
  LocalMatrix jump_edge(const InteriorEdge& e, Field f) const;

  /// Volume and boundary parts of the right-hand side for test field f
  /// (s: l1, theta: l2, sigma: l3, u: l4, p: l5).
  LocalVector rhs_cell(int cell, Field f) const;
  LocalVector rhs_edge(const BoundaryEdge& e, Field f) const;

  /// Coefficients of the stress diagonal; the defaults reproduce d.
  struct StressWeights {
    double stf_gradient = 1.0;   // times Kn
    double mass = 0.5;           // times 1/Kn
    bool wall_terms = true;      // chi-weighted trace terms
    bool inflow_term = true;     // epsilon_w chi sigma_nn psi_nn
  };
  LocalMatrix d_cell(int cell, const StressWeights& w) const;
  LocalMatrix d_edge(const BoundaryEdge& e, const StressWeights& w) const;

  const QuadratureRule& cell_rule() const { return cell_rule_; }
  const QuadratureRule& edge_rule() const { return edge_rule_; }

 private:
  struct RefTable {
    std::vector<std::array<double, 6>> values;
    std::vector<std::array<std::array<double, 2>, 6>> gradients;
  };
  struct CellEval;
  struct EdgeEval;
  CellEval eval_cell(int cell, int degree) const;
  EdgeEval eval_edge(int cell, int va, int vb, int degree) const;

  const MixedSpace& space_;
  const ProblemData& data_;
  QuadratureRule cell_rule_;
  QuadratureRule edge_rule_;
  std::array<RefTable, 2> ref_;  // by degree - 1
};

/// Reference coordinates of the point at parameter t along the edge (va -> vb) of a cell.
std::array<double, 2> edge_reference_point(const Mesh& mesh, int cell, int va, int vb, double t);

/// Quadratic functionals of a global coefficient vector, evaluated element by element.
double stabilized_energy(const FormKernels& k, const Eigen::VectorXd& u);  // a + d_bar + j
double triple_norm_squared(const FormKernels& k, const Eigen::VectorXd& u);

}  // namespace r13
