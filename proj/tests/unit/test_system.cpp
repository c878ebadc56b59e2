#include <doctest.h>

#include <cstdlib>
#include <memory>
#include <sstream>

#include "r13fem/cases.hpp"
#include "r13fem/error.hpp"
#include "r13fem/system.hpp"

using namespace r13;

namespace {

AssembledSystem ring_system(double h, int deg, int threads) {
  const ProblemSpec spec = case_ring_flow(h);
  auto mesh = std::make_shared<const Mesh>(spec.mesh.build());
  auto sp = std::make_shared<const MixedSpace>(mesh, deg, deg);
  AssemblyOptions opt;
  opt.threads = threads;
  return assemble(sp, spec.data, opt);
}

bool bitwise_equal(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) return false;
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    SparseMatrix::InnerIterator ia(a, k), ib(b, k);
    for (; ia && ib; ++ia, ++ib) {
      if (ia.index() != ib.index() || ia.value() != ib.value()) return false;
    }
    if (ia || ib) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("assembly is bitwise reproducible across runs and thread counts") {
  const AssembledSystem a = ring_system(0.3, 2, 1);
  const AssembledSystem b = ring_system(0.3, 2, 1);
  const AssembledSystem c = ring_system(0.3, 2, 4);
  CHECK(bitwise_equal(a.matrix, b.matrix));
  CHECK(bitwise_equal(a.matrix, c.matrix));
  CHECK((a.rhs.array() == c.rhs.array()).all());
  CHECK(a.matrix.rows() == a.space->size());
}

TEST_CASE("worker count honours the environment cap") {
  CHECK(worker_count(3) == 3);
  setenv("R13FEM_THREADS", "2", 1);
  CHECK(worker_count() == 2);
  setenv("R13FEM_THREADS", "junk", 1);
  CHECK(worker_count() >= 1);
  unsetenv("R13FEM_THREADS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("ring solve meets the residual contract") {
  const AssembledSystem sys = ring_system(0.3, 1, 0);
  const SolveResult r = solve(sys);
  CHECK(r.residual <= 1e-10);
  const double direct = (sys.matrix * r.x - sys.rhs).norm() / sys.rhs.norm();
  CHECK(direct <= 1e-10);
  CHECK(r.rcond > 0.0);
}

TEST_CASE("floating pressure is pinned to zero mean") {
  ProblemSpec spec = case_channel(0.5, 0.25);
  for (auto& [tag, bc] : spec.data.boundary) bc.epsilon_w = 0.0;
  auto mesh = std::make_shared<const Mesh>(spec.mesh.build());
  auto sp = std::make_shared<const MixedSpace>(mesh, 1, 1);
  const AssembledSystem sys = assemble(sp, spec.data);
  CHECK(sys.pressure_floating);
  const SolveResult r = solve(sys);
  CHECK(r.residual <= 1e-10);
}

TEST_CASE("unstabilized equal order with impermeable walls is rejected") {
  ProblemSpec spec = case_channel(0.5, 0.25);
  for (auto& [tag, bc] : spec.data.boundary) bc.epsilon_w = 0.0;
  spec.data.stabilization.enabled = false;
  auto mesh = std::make_shared<const Mesh>(spec.mesh.build());
  auto sp = std::make_shared<const MixedSpace>(mesh, 1, 1);
  const AssembledSystem sys = assemble(sp, spec.data);
  CHECK_THROWS_AS(solve(sys), SolverError);
}

TEST_CASE("singular and mismatched systems raise solver errors") {
  auto mesh = std::make_shared<const Mesh>(generate_rectangle(1, 1, 0.5));
  auto sp = std::make_shared<const MixedSpace>(mesh, 1, 1);
  AssembledSystem sys;
  sys.space = sp;
  sys.matrix.resize(4, 4);
  sys.matrix.insert(0, 0) = 1.0;
  sys.matrix.insert(1, 1) = 1.0;
  sys.rhs = Eigen::VectorXd::Ones(4);
  CHECK_THROWS_AS(solve(sys), SolverError);
  sys.rhs = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(solve(sys), SolverError);
}

TEST_CASE("MatrixMarket dump") {
  SparseMatrix m(2, 3);
  m.insert(0, 1) = 2.5;
  m.insert(1, 0) = -1.0;
  m.makeCompressed();
  std::ostringstream out;
  write_matrix_market(m, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real general");
  std::string line;
  while (std::getline(in, line) && line[0] == '%') {
  }
  CHECK(line == "2 3 2");
  int i, j;
  double v;
  in >> i >> j >> v;
  CHECK(i == 1);
  CHECK(j == 2);
  CHECK(v == 2.5);
}
