#pragma once

#include <string>
#include <vector>

#include "r13fem/mesh.hpp"
#include "r13fem/problem.hpp"

namespace r13 {

/// Where the mesh of a problem comes from.
struct MeshSource {
  enum class Kind { rectangle, annulus, racetrack, beam_chamber, file };
  Kind kind = Kind::rectangle;
  double width = 1.0, height = 1.0;           // rectangle
  double r_inner = 0.5, r_outer = 2.0;        // annulus, racetrack
  double half_length = 1.0;                   // racetrack
  double chamber = 8.0, beam = 2.0, offset = 1.0, grading = 4.0;  // beam_chamber
  double h = 0.1;
  std::string path;                           // file

  Mesh build() const;
};

struct ProblemSpec {
  std::string name;
  MeshSource mesh;
  int degree_high = 1;
  int degree_low = 1;
  ProblemData data;
};

/// Directory holding the shipped mesh fixtures (R13FEM_DATA_DIR overrides the
/// compiled-in location).
std::string data_dir();
std::string fixture_path(const std::string& file_name);

/// Flow between two coaxial circles (radii 0.5 and 2) with inflow/outflow data on the outer wall.
ProblemSpec case_ring_flow(double h = 0.1);
/// Force-driven channel [0,4]x[0,1]; about 10.8k triangles at the default size.
ProblemSpec case_channel(double kn = 0.25, double h = 0.0274);
/// Temperature-driven racetrack channel; `mesh_file` is a fixture name or a path.
ProblemSpec case_knudsen_pump(const std::string& mesh_file = "pump_h0.125.msh");
/// Hot beam in a cold chamber; level s selects the fixture edge_s<s>.msh.
ProblemSpec case_thermal_edge(int level = 0);

/// Pump wall temperature expressions for the inner tags 1..4 (outer tags reuse them).
std::vector<std::string> pump_temperature_expressions();

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
  std::string message() const;
};

/// Checks admissibility (Kn > 0, chi > 0, eps >= 0, positive deltas when stabilized),
/// degrees, and, if a mesh is given, that every mesh tag has boundary data.
ValidationReport validate(const ProblemSpec& spec, const Mesh* mesh = nullptr);

}  // namespace r13
