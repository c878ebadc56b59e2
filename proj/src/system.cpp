#include "r13fem/system.hpp"

#include <chrono>
#include <functional>
#include <ostream>
#include <thread>

#include "r13fem/error.hpp"
#include "r13fem/forms.hpp"

#ifdef R13FEM_HAVE_UMFPACK
#include <umfpack.h>
#else
#include <Eigen/SparseLU>
#endif

namespace r13 {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct Sink {
  Triplets triplets;
  Eigen::VectorXd rhs;
  int row_shift = 0;
  int col_shift = 0;

  void add(const LocalMatrix& m, double sign = 1.0, bool transpose = false) {
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      for (std::size_t j = 0; j < m.cols.size(); ++j) {
        const double v = m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (v == 0.0) continue;
        if (transpose) {
          triplets.emplace_back(m.cols[j] - row_shift, m.rows[i] - col_shift, sign * v);
        } else {
          triplets.emplace_back(m.rows[i] - row_shift, m.cols[j] - col_shift, sign * v);
        }
      }
    }
  }
  void add(const LocalVector& v) {
    for (std::size_t i = 0; i < v.rows.size(); ++i) rhs(v.rows[i]) += v.values(static_cast<Eigen::Index>(i));
  }
};

enum class Item { cell, boundary, interior };

// Visits every cell, boundary edge and interior edge in fixed chunks, emitting
// contributions into per-chunk buffers that are summed in chunk order, so the
// result does not depend on the number of workers.
void drive(const Mesh& mesh, int threads, int rows, int cols, int row_shift, int col_shift, bool with_rhs,
           const std::function<void(Item, int, Sink&)>& emit, SparseMatrix& matrix, Eigen::VectorXd* rhs) {
  const long n_cells = mesh.num_cells();
  const long n_bnd = static_cast<long>(mesh.boundary_edges().size());
  const long n_int = static_cast<long>(mesh.interior_edges().size());
  const long total = n_cells + n_bnd + n_int;
  const long chunk = std::max<long>(4096, total / 16 + 1);
  const long n_chunks = (total + chunk - 1) / chunk;

  matrix.resize(rows, cols);
  matrix.setZero();
  if (rhs) *rhs = Eigen::VectorXd::Zero(rows);

  auto run_chunk = [&](long c, SparseMatrix& out, Eigen::VectorXd& out_rhs) {
    Sink sink;
    sink.row_shift = row_shift;
    sink.col_shift = col_shift;
    if (with_rhs) sink.rhs = Eigen::VectorXd::Zero(rows);
    const long begin = c * chunk, end = std::min(total, begin + chunk);
    for (long i = begin; i < end; ++i) {
      if (i < n_cells) {
        emit(Item::cell, static_cast<int>(i), sink);
      } else if (i < n_cells + n_bnd) {
        emit(Item::boundary, static_cast<int>(i - n_cells), sink);
      } else {
        emit(Item::interior, static_cast<int>(i - n_cells - n_bnd), sink);
      }
    }
    out.resize(rows, cols);
    out.setFromTriplets(sink.triplets.begin(), sink.triplets.end());
    out_rhs = std::move(sink.rhs);
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n_chunks)));
  for (long wave = 0; wave < n_chunks; wave += workers) {
    const long count = std::min<long>(workers, n_chunks - wave);
    std::vector<SparseMatrix> parts(count);
    std::vector<Eigen::VectorXd> part_rhs(count);
    std::vector<std::exception_ptr> errors(count);
    auto task = [&](long k) {
      try {
        run_chunk(wave + k, parts[k], part_rhs[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    };
    if (count == 1) {
      task(0);
    } else {
      std::vector<std::thread> pool;
      for (long k = 0; k < count; ++k) pool.emplace_back(task, k);
      for (auto& t : pool) t.join();
    }
    for (long k = 0; k < count; ++k) {
      if (errors[k]) std::rethrow_exception(errors[k]);
      matrix += parts[k];
      if (rhs && with_rhs) *rhs += part_rhs[k];
    }
  }
  matrix.makeCompressed();
}

std::array<int, 2> block_fields(Block b) {
  switch (b) {
    case Block::A: return {static_cast<int>(Field::s), static_cast<int>(Field::s)};
    case Block::B: return {static_cast<int>(Field::theta), static_cast<int>(Field::s)};
    case Block::C: return {static_cast<int>(Field::sigma), static_cast<int>(Field::s)};
    case Block::D: return {static_cast<int>(Field::sigma), static_cast<int>(Field::sigma)};
    case Block::E: return {static_cast<int>(Field::u), static_cast<int>(Field::sigma)};
    case Block::F: return {static_cast<int>(Field::p), static_cast<int>(Field::sigma)};
    case Block::G: return {static_cast<int>(Field::p), static_cast<int>(Field::u)};
    case Block::H: return {static_cast<int>(Field::p), static_cast<int>(Field::p)};
    case Block::J_theta: return {static_cast<int>(Field::theta), static_cast<int>(Field::theta)};
    case Block::J_u: return {static_cast<int>(Field::u), static_cast<int>(Field::u)};
    case Block::J_p: return {static_cast<int>(Field::p), static_cast<int>(Field::p)};
  }
  return {0, 0};
}

void check_tags(const Mesh& mesh, const ProblemData& data) {
  for (int tag : mesh.tags()) data.bc(tag);
}

}  // namespace

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("R13FEM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

AssembledSystem assemble(std::shared_ptr<const MixedSpace> space, const ProblemData& data,
                         const AssemblyOptions& options) {
  if (!space) throw Error("assemble needs a space");
  const Mesh& mesh = space->mesh();
  check_tags(mesh, data);
  const FormKernels k(*space, data, options.cell_quadrature, options.edge_quadrature);
  const bool stabilized = data.stabilization.enabled;
  auto emit = [&](Item item, int i, Sink& s) {
    if (item == Item::cell) {
      s.add(k.a_cell(i));
      const LocalMatrix b = k.b_cell(i);
      s.add(b);
      s.add(b, -1.0, true);
      const LocalMatrix c = k.c_cell(i);
      s.add(c);
      s.add(c, -1.0, true);
      s.add(k.d_cell(i));
      const LocalMatrix e = k.e_cell(i);
      s.add(e);
      s.add(e, -1.0, true);
      const LocalMatrix g = k.g_cell(i);
      s.add(g, -1.0);
      s.add(g, 1.0, true);
      for (Field f : {Field::theta, Field::u, Field::p}) s.add(k.rhs_cell(i, f));
    } else if (item == Item::boundary) {
      const BoundaryEdge& be = mesh.boundary_edges()[i];
      s.add(k.a_edge(be));
      const LocalMatrix c = k.c_edge(be);
      s.add(c);
      s.add(c, -1.0, true);
      s.add(k.d_edge(be));
      const LocalMatrix f = k.f_edge(be);
      s.add(f);
      s.add(f, 1.0, true);
      s.add(k.h_edge(be));
      for (Field f2 : {Field::s, Field::sigma, Field::p}) s.add(k.rhs_edge(be, f2));
    } else if (stabilized) {
      const InteriorEdge& ie = mesh.interior_edges()[i];
      for (Field f : {Field::theta, Field::u, Field::p}) s.add(k.cip_edge(ie, f));
    }
  };
  AssembledSystem sys;
  sys.space = space;
  const int n = space->size();
  drive(mesh, worker_count(options.threads), n, n, 0, 0, true, emit, sys.matrix, &sys.rhs);
  sys.pressure_floating = data.pressure_floating();
  return sys;
}

SparseMatrix assemble_block(const MixedSpace& space, const ProblemData& data, Block block,
                            const AssemblyOptions& options) {
  const Mesh& mesh = space.mesh();
  check_tags(mesh, data);
  const FormKernels k(space, data, options.cell_quadrature, options.edge_quadrature);
  const auto fields = block_fields(block);
  const auto rr = space.range(static_cast<Field>(fields[0]));
  const auto cr = space.range(static_cast<Field>(fields[1]));
  auto emit = [&](Item item, int i, Sink& s) {
    if (item == Item::cell) {
      switch (block) {
        case Block::A: s.add(k.a_cell(i)); break;
        case Block::B: s.add(k.b_cell(i)); break;
        case Block::C: s.add(k.c_cell(i)); break;
        case Block::D: s.add(k.d_cell(i)); break;
        case Block::E: s.add(k.e_cell(i)); break;
        case Block::G: s.add(k.g_cell(i)); break;
        default: break;
      }
    } else if (item == Item::boundary) {
      const BoundaryEdge& be = mesh.boundary_edges()[i];
      switch (block) {
        case Block::A: s.add(k.a_edge(be)); break;
        case Block::C: s.add(k.c_edge(be)); break;
        case Block::D: s.add(k.d_edge(be)); break;
        case Block::F: s.add(k.f_edge(be)); break;
        case Block::H: s.add(k.h_edge(be)); break;
        default: break;
      }
    } else {
      const InteriorEdge& ie = mesh.interior_edges()[i];
      switch (block) {
        case Block::J_theta: s.add(k.cip_edge(ie, Field::theta)); break;
        case Block::J_u: s.add(k.cip_edge(ie, Field::u)); break;
        case Block::J_p: s.add(k.cip_edge(ie, Field::p)); break;
        default: break;
      }
    }
  };
  SparseMatrix m;
  drive(mesh, worker_count(options.threads), rr[1] - rr[0], cr[1] - cr[0], rr[0], cr[0], false, emit, m, nullptr);
  return m;
}

SparseMatrix extract_block(const AssembledSystem& system, Field row, Field col) {
  if (!system.space) throw Error("system has no space");
  const auto rr = system.space->range(row);
  const auto cr = system.space->range(col);
  return system.matrix.block(rr[0], cr[0], rr[1] - rr[0], cr[1] - cr[0]);
}

namespace {

#ifdef R13FEM_HAVE_UMFPACK
// 64-bit indices: the 32-bit UMFPACK interface runs out of addressable workspace on large P2 systems.
using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, SuiteSparse_long>;
#else
using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
#endif

// Zero-mean pressure constraint row: integrals of the pressure basis functions.
Eigen::VectorXd pressure_mean_row(const MixedSpace& space) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(space.size());
  const int deg = space.degree(Field::p);
  const ReferenceElement& el = space.element(deg);
  const QuadratureRule rule = triangle_quadrature(4);
  int nodes[6];
  for (int cell = 0; cell < space.mesh().num_cells(); ++cell) {
    const double area = space.mesh().cell_geometry(cell).area;
    space.cell_nodes(cell, deg, nodes);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto v = el.values(rule.points[q][0], rule.points[q][1]);
      for (int i = 0; i < el.num_nodes(); ++i) {
        c(space.dof(Component::p, nodes[i])) += rule.weights[q] * 2.0 * area * v[i];
      }
    }
  }
  return c / c.sum();
}

class DirectSolver {
 public:
  explicit DirectSolver(const ColMatrix& a) : a_(a) {
#ifdef R13FEM_HAVE_UMFPACK
    umfpack_dl_defaults(control_);
    // Nested dissection gives far less fill than AMD on these 2D meshes.
    control_[UMFPACK_ORDERING] = UMFPACK_ORDERING_METIS;
    double info[UMFPACK_INFO];
    int status = umfpack_dl_symbolic(a_.rows(), a_.cols(), a_.outerIndexPtr(), a_.innerIndexPtr(), a_.valuePtr(),
                                     &symbolic_, control_, info);
    if (status != UMFPACK_OK) {
      control_[UMFPACK_ORDERING] = UMFPACK_ORDERING_AMD;
      status = umfpack_dl_symbolic(a_.rows(), a_.cols(), a_.outerIndexPtr(), a_.innerIndexPtr(), a_.valuePtr(),
                                   &symbolic_, control_, info);
    }
    if (status != UMFPACK_OK) throw SolverError("symbolic factorization failed (UMFPACK status " + std::to_string(status) + ")");
    status = umfpack_dl_numeric(a_.outerIndexPtr(), a_.innerIndexPtr(), a_.valuePtr(), symbolic_, &numeric_,
                                control_, info);
    rcond_ = info[UMFPACK_RCOND];
    if (status == UMFPACK_WARNING_singular_matrix) {
      throw SolverError("matrix is singular (zero pivot in the LU factorization)");
    }
    if (status != UMFPACK_OK) throw SolverError("numeric factorization failed (UMFPACK status " + std::to_string(status) + ")");
#else
    lu_.compute(a_);
    if (lu_.info() != Eigen::Success) throw SolverError("matrix is singular: " + lu_.lastErrorMessage());
    const Eigen::VectorXd d = lu_.matrixU().toDense().diagonal().cwiseAbs();  // small systems only
    rcond_ = d.minCoeff() / d.maxCoeff();
#endif
  }
  ~DirectSolver() {
#ifdef R13FEM_HAVE_UMFPACK
    if (numeric_) umfpack_dl_free_numeric(&numeric_);
    if (symbolic_) umfpack_dl_free_symbolic(&symbolic_);
#endif
  }
  DirectSolver(const DirectSolver&) = delete;
  DirectSolver& operator=(const DirectSolver&) = delete;

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
#ifdef R13FEM_HAVE_UMFPACK
    Eigen::VectorXd x(b.size());
    double info[UMFPACK_INFO];
    const int status = umfpack_dl_solve(UMFPACK_A, a_.outerIndexPtr(), a_.innerIndexPtr(), a_.valuePtr(), x.data(),
                                        b.data(), numeric_, const_cast<double*>(control_), info);
    if (status != UMFPACK_OK) throw SolverError("triangular solve failed (UMFPACK status " + std::to_string(status) + ")");
    return x;
#else
    return lu_.solve(b);
#endif
  }

  double rcond() const { return rcond_; }

 private:
  const ColMatrix& a_;
  double rcond_ = 0.0;
#ifdef R13FEM_HAVE_UMFPACK
  void* symbolic_ = nullptr;
  void* numeric_ = nullptr;
  double control_[UMFPACK_CONTROL];
#else
  Eigen::SparseLU<ColMatrix> lu_;
#endif
};

}  // namespace

SolveResult solve(const AssembledSystem& system, const SolveOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index n = system.matrix.rows();
  if (n != system.matrix.cols() || n != system.rhs.size()) throw SolverError("system dimensions do not match");

  // Optional symmetric diagonal scaling D A D y = D b, x = D y.
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  if (options.equilibrate) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = std::abs(system.matrix.coeff(i, i));
      double row_max = 0.0;
      for (SparseMatrix::InnerIterator it(system.matrix, i); it; ++it) row_max = std::max(row_max, std::abs(it.value()));
      const double s = d > 0.0 ? d : row_max;
      if (s > 0.0) scale(i) = 1.0 / std::sqrt(s);
    }
  }

  const bool border = system.pressure_floating && system.space;
  const Eigen::Index m = border ? n + 1 : n;
  ColMatrix a(m, m);
  {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(system.matrix.nonZeros() + (border ? 2 * (system.space->range(Field::p)[1] - system.space->range(Field::p)[0]) : 0));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (SparseMatrix::InnerIterator it(system.matrix, i); it; ++it) {
        t.emplace_back(static_cast<int>(i), static_cast<int>(it.col()), scale(i) * it.value() * scale(it.col()));
      }
    }
    if (border) {
      const Eigen::VectorXd c = pressure_mean_row(*system.space);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (c(i) == 0.0) continue;
        t.emplace_back(static_cast<int>(n), static_cast<int>(i), c(i) * scale(i));
        t.emplace_back(static_cast<int>(i), static_cast<int>(n), c(i) * scale(i));
      }
    }
    a.setFromTriplets(t.begin(), t.end());
    a.makeCompressed();
  }

  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b.head(n) = scale.cwiseProduct(system.rhs);

  DirectSolver lu(a);
  SolveResult result;
  result.rcond = lu.rcond();
  if (!(result.rcond > options.min_rcond)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "matrix is numerically singular (reciprocal pivot ratio %.3g)", result.rcond);
    throw SolverError(buf);
  }

  Eigen::VectorXd y = lu.solve(b);
  auto residual_of = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return system.rhs - system.matrix * x;
  };
  const double bnorm = system.rhs.norm();
  auto relative = [&](const Eigen::VectorXd& r) { return bnorm > 0.0 ? r.norm() / bnorm : r.norm(); };

  Eigen::VectorXd x = scale.cwiseProduct(y.head(n));
  Eigen::VectorXd r = residual_of(x);
  double res = relative(r);
  for (int step = 0; step < options.refinement_steps && res > 0.1 * options.tolerance; ++step) {
    Eigen::VectorXd rb = Eigen::VectorXd::Zero(m);
    rb.head(n) = scale.cwiseProduct(r);
    const Eigen::VectorXd dy = lu.solve(rb);
    const Eigen::VectorXd x_new = x + scale.cwiseProduct(dy.head(n));
    const Eigen::VectorXd r_new = residual_of(x_new);
    const double res_new = relative(r_new);
    if (!(res_new < res)) break;
    x = x_new;
    r = r_new;
    res = res_new;
  }
  result.residual = res;
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!std::isfinite(res) || res > options.tolerance) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "relative residual %.3e exceeds the tolerance %.1e", res, options.tolerance);
    throw SolverError(buf);
  }
  result.x = std::move(x);
  return result;
}

void write_matrix_market(const SparseMatrix& m, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < m.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << buf << '\n';
    }
  }
}

}  // namespace r13
