#include "r13fem/cases.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "r13fem/error.hpp"

#ifndef R13FEM_DATA_DIR
#define R13FEM_DATA_DIR "data"
#endif

namespace r13 {

Mesh MeshSource::build() const {
  switch (kind) {
    case Kind::rectangle: return generate_rectangle(width, height, h);
    case Kind::annulus: return generate_annulus(r_inner, r_outer, h);
    case Kind::racetrack: return generate_racetrack(half_length, r_inner, r_outer, h);
    case Kind::beam_chamber: return generate_beam_chamber(chamber, beam, offset, h, grading);
    case Kind::file: return read_gmsh(path);
  }
  throw MeshError("unknown mesh source");
}

std::string data_dir() {
  if (const char* env = std::getenv("R13FEM_DATA_DIR")) {
    if (*env) return env;
  }
  return R13FEM_DATA_DIR;
}

std::string fixture_path(const std::string& file_name) {
  if (std::filesystem::exists(file_name)) return file_name;
  return (std::filesystem::path(data_dir()) / "meshes" / file_name).string();
}

ProblemSpec case_ring_flow(double h) {
  ProblemSpec spec;
  spec.name = "ring";
  spec.mesh.kind = MeshSource::Kind::annulus;
  spec.mesh.r_inner = 0.5;
  spec.mesh.r_outer = 2.0;
  spec.mesh.h = h;
  spec.data.physics = {1.0, 1.0};
  spec.data.stabilization = {true, 1.0, 1.0, 0.01};

  // Normal components from the exact circle through the evaluation point.
  auto nx = [](Point p) { return p.x / std::hypot(p.x, p.y); };
  auto ny = [](Point p) { return p.y / std::hypot(p.x, p.y); };
  BoundaryData inner;
  inner.theta_w = 1.0;
  inner.epsilon_w = 1e-3;
  BoundaryData outer;
  outer.theta_w = 2.0;
  outer.epsilon_w = 1e3;
  outer.p_w = ScalarField::function([nx](Point p) { return -0.27 * nx(p); }, "-0.27*n_x");
  outer.u_n_w = ScalarField::function(nx, "n_x");
  outer.u_t_w = ScalarField::function([ny](Point p) { return -ny(p); }, "-n_y");
  spec.data.boundary[1] = inner;
  spec.data.boundary[2] = outer;
  return spec;
}

ProblemSpec case_channel(double kn, double h) {
  ProblemSpec spec;
  spec.name = "channel";
  spec.mesh.kind = MeshSource::Kind::rectangle;
  spec.mesh.width = 4.0;
  spec.mesh.height = 1.0;
  spec.mesh.h = h;
  spec.data.physics = {kn, 1.0};
  spec.data.stabilization = {true, 1.0, 1.0, 0.1};
  spec.data.sources.b_x = 1.0;
  for (int tag = 1; tag <= 4; ++tag) {
    BoundaryData bc;
    bc.theta_w = 1.0;
    bc.epsilon_w = (tag % 2 == 1) ? 1e-3 : 1e3;
    spec.data.boundary[tag] = bc;
  }
  return spec;
}

std::vector<std::string> pump_temperature_expressions() {
  // atan2(a, b) is the polar angle of the point (b, a).
  return {
      "1/2 * 2/pi * atan2(y, x - 1) + 1",
      "0.5 * x + 1",
      "-1/2 * 2/pi * atan2(y, -1 - x) + 1",
      "-0.5 * x + 1",
  };
}

ProblemSpec case_knudsen_pump(const std::string& mesh_file) {
  ProblemSpec spec;
  spec.name = "knudsen_pump";
  spec.mesh.kind = MeshSource::Kind::file;
  spec.mesh.path = fixture_path(mesh_file);
  spec.data.physics = {0.1, 1.0};
  spec.data.stabilization = {true, 1.0, 1.0, 0.1};
  const auto expr = pump_temperature_expressions();
  for (int k = 0; k < 4; ++k) {
    BoundaryData bc;
    bc.theta_w = Expr::parse(expr[k]);
    spec.data.boundary[k + 1] = bc;
    spec.data.boundary[k + 5] = bc;
  }
  return spec;
}

ProblemSpec case_thermal_edge(int level) {
  if (level < 0) throw ValidationError("refinement level must be non-negative");
  ProblemSpec spec;
  spec.name = "thermal_edge";
  spec.mesh.kind = MeshSource::Kind::file;
  spec.mesh.path = fixture_path("edge_s" + std::to_string(level) + ".msh");
  spec.data.physics = {0.001, 1.0};
  spec.data.stabilization = {true, 1.0, 1.0, 0.1};
  BoundaryData chamber;
  chamber.theta_w = 0.0;
  BoundaryData beam;
  beam.theta_w = 1.0;
  spec.data.boundary[1] = chamber;
  spec.data.boundary[2] = beam;
  return spec;
}

std::string ValidationReport::message() const {
  std::string out;
  for (const auto& e : errors) out += "error: " + e + "\n";
  for (const auto& w : warnings) out += "warning: " + w + "\n";
  return out;
}

ValidationReport validate(const ProblemSpec& spec, const Mesh* mesh) {
  ValidationReport r;
  const auto& d = spec.data;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  if (!(d.physics.kn > 0.0) || !std::isfinite(d.physics.kn)) r.errors.push_back("Kn must be positive, got " + num(d.physics.kn));
  if (!(d.physics.chi_tilde > 0.0)) r.errors.push_back("chi_tilde must be positive, got " + num(d.physics.chi_tilde));
  for (const auto& [tag, bc] : d.boundary) {
    if (!(bc.epsilon_w >= 0.0)) {
      r.errors.push_back("epsilon_w on tag " + std::to_string(tag) + " must be non-negative, got " + num(bc.epsilon_w));
    }
    if (bc.chi_tilde && !(*bc.chi_tilde > 0.0)) {
      r.errors.push_back("chi_tilde on tag " + std::to_string(tag) + " must be positive");
    }
  }
  const auto& st = d.stabilization;
  if (st.enabled) {
    if (!(st.delta_theta > 0.0) || !(st.delta_u > 0.0) || !(st.delta_p > 0.0)) {
      r.errors.push_back("stabilization weights must be positive when stabilization is enabled");
    }
  }
  for (int deg : {spec.degree_high, spec.degree_low}) {
    if (deg != 1 && deg != 2) r.errors.push_back("element degrees must be 1 or 2, got " + std::to_string(deg));
  }
  if (spec.degree_high < spec.degree_low) r.errors.push_back("degree_high must not be smaller than degree_low");
  if (!st.enabled && spec.degree_high == spec.degree_low) {
    r.warnings.push_back("equal-order elements without stabilization usually give a singular system");
  }
  if (mesh) {
    for (int tag : mesh->tags()) {
      if (!d.boundary.count(tag)) r.errors.push_back("mesh tag " + std::to_string(tag) + " has no boundary data");
    }
  }
  return r;
}

}  // namespace r13
