#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <memory>
#include <string>

#include "r13fem/fespace.hpp"
#include "r13fem/problem.hpp"

namespace r13 {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// The stabilized linear system in the block order (s, theta, sigma, u, p).
struct AssembledSystem {
  std::shared_ptr<const MixedSpace> space;
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  /// Set when every wall is impermeable; the pressure is then fixed by a zero-mean
  /// constraint during the solve.
  bool pressure_floating = false;
};

struct AssemblyOptions {
  int threads = 0;  // 0: R13FEM_THREADS or the hardware concurrency
  int cell_quadrature = 6;
  int edge_quadrature = 6;
};

/// Number of worker threads: R13FEM_THREADS if set and positive, else the hardware count.
int worker_count(int requested = 0);

AssembledSystem assemble(std::shared_ptr<const MixedSpace> space, const ProblemData& data,
                         const AssemblyOptions& options = {});

/// Sub-matrices of the individual sub-functionals and interior penalty terms, each
/// assembled on its own. Rows and columns are local to the field ranges; see
/// FormKernels for the row/column fields of A..H. J_theta, J_u, J_p are square on
/// their field.
enum class Block { A, B, C, D, E, F, G, H, J_theta, J_u, J_p };
SparseMatrix assemble_block(const MixedSpace& space, const ProblemData& data, Block block,
                            const AssemblyOptions& options = {});

/// Sub-matrix of the assembled system for a (row field, column field) pair.
SparseMatrix extract_block(const AssembledSystem& system, Field row, Field col);

struct SolveOptions {
  double tolerance = 1e-10;    // relative residual contract
  int refinement_steps = 3;
  double min_rcond = 1e-14;    // reciprocal pivot ratio below which the matrix counts as singular
  bool equilibrate = false;    // symmetric diagonal scaling before factorization
};

struct SolveResult {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||Ax - b|| / ||b|| (absolute when b = 0)
  double rcond = 0.0;     // reciprocal pivot growth estimate of the factorization
  double seconds = 0.0;
};

/// Sparse direct solve. Throws SolverError for singular or near-singular
/// factorizations and when the residual contract is not met.
SolveResult solve(const AssembledSystem& system, const SolveOptions& options = {});

/// MatrixMarket coordinate (real general) dump.
void write_matrix_market(const SparseMatrix& m, std::ostream& out);

}  // namespace r13
