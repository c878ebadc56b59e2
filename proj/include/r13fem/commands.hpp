#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "r13fem/cases.hpp"
#include "r13fem/config.hpp"
#include "r13fem/postproc.hpp"
#include "r13fem/system.hpp"

namespace r13 {

struct RunTimings {
  double setup = 0.0;     // mesh + space
  double assembly = 0.0;
  double solve = 0.0;
};

struct SolveRun {
  Solution solution;
  SolveResult result;
  RunTimings timings;
  int dofs = 0;
};

/// Builds the mesh, assembles and solves. The mesh may be supplied to reuse it.
SolveRun run_solve(const ProblemSpec& spec, MeshPtr mesh = nullptr, const AssemblyOptions& assembly = {},
                   const SolveOptions& solver = {});

struct ConvergenceLevel {
  double h = 0.0;  // largest edge of the mesh
  int dofs = 0;
  ErrorReport errors;
};

/// Solves on every mesh and compares against the solve on `reference`.
std::vector<ConvergenceLevel> run_convergence(const ProblemSpec& base, const std::vector<MeshSource>& levels,
                                              const MeshSource& reference, std::ostream* log = nullptr,
                                              const AssemblyOptions& assembly = {});

/// Least-squares slope of log(e) over log(h).
double fitted_slope(const std::vector<double>& h, const std::vector<double>& e);

/// Column order of errors.csv and the matching component.
struct ErrorColumn {
  const char* name;
  Component component;
};
const std::vector<ErrorColumn>& error_columns();
CsvTable errors_table(const std::vector<ConvergenceLevel>& levels);

struct SweepPoint {
  double kn;
  double mass_flow;
};
/// One mesh, one solve per Knudsen number; mass flow through `tag`.
std::vector<SweepPoint> run_kn_sweep(const ProblemSpec& base, const std::vector<double>& kn, int tag,
                                     std::ostream* log = nullptr, const AssemblyOptions& assembly = {});

/// (3/2) * integral of |u_x| over x = 0, y in [-2, -1/2] (trapezoid over n samples).
double pump_mean_velocity(const Solution& s, int n = 400);

struct CommandOptions {
  std::string config;
  std::optional<double> kn;
  std::string out_dir = ".";
};

/// CLI entry points. They return the process exit code; errors are reported on `err`.
int cmd_solve(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_convergence(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_kn_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sample(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace r13
