#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "r13fem/commands.hpp"
#include "r13fem/config.hpp"
#include "r13fem/error.hpp"
#include "r13fem/tensorops.hpp"

namespace py = pybind11;
using namespace r13;

namespace {

Eigen::MatrixXd vertex_array(const Mesh& m) {
  Eigen::MatrixXd out(m.num_vertices(), 2);
  for (int i = 0; i < m.num_vertices(); ++i) {
    out(i, 0) = m.vertices()[i].x;
    out(i, 1) = m.vertices()[i].y;
  }
  return out;
}

Eigen::MatrixXi cell_array(const Mesh& m) {
  Eigen::MatrixXi out(m.num_cells(), 3);
  for (int c = 0; c < m.num_cells(); ++c) {
    for (int k = 0; k < 3; ++k) out(c, k) = m.cells()[c][k];
  }
  return out;
}

Point to_point(std::array<double, 2> p) { return {p[0], p[1]}; }

}  // namespace

PYBIND11_MODULE(_r13fem, m) {
  m.doc() = "Linearized R13 mixed finite elements with CIP stabilization";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<EvalError>(m, "EvalError", base.ptr());
  py::register_exception<MeshError>(m, "MeshError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<Expr>(m, "Expr")
      .def_static("parse", &Expr::parse, py::arg("text"))
      .def("eval", &Expr::eval, py::arg("x") = 0.0, py::arg("y") = 0.0)
      .def("is_constant", &Expr::is_constant)
      .def("__str__", &Expr::to_string);

  py::class_<Mesh, std::shared_ptr<Mesh>>(m, "Mesh")
      .def_property_readonly("vertices", &vertex_array)
      .def_property_readonly("cells", &cell_array)
      .def_property_readonly("num_vertices", &Mesh::num_vertices)
      .def_property_readonly("num_cells", &Mesh::num_cells)
      .def_property_readonly("num_edges", &Mesh::num_edges)
      .def_property_readonly("num_boundary_edges", [](const Mesh& self) { return self.boundary_edges().size(); })
      .def_property_readonly("num_interior_edges", [](const Mesh& self) { return self.interior_edges().size(); })
      .def("tags", &Mesh::tags)
      .def("max_edge_length", &Mesh::max_edge_length)
      .def("locate", [](const Mesh& self, std::array<double, 2> p) { return self.locate(to_point(p)); });

  m.def("generate_rectangle", [](double w, double h, double target) { return std::make_shared<Mesh>(generate_rectangle(w, h, target)); },
        py::arg("width"), py::arg("height"), py::arg("h"));
  m.def("generate_annulus", [](double r1, double r2, double h) { return std::make_shared<Mesh>(generate_annulus(r1, r2, h)); },
        py::arg("r_inner"), py::arg("r_outer"), py::arg("h"));
  m.def("read_gmsh", [](const std::string& path) { return std::make_shared<Mesh>(read_gmsh(path)); }, py::arg("path"));
  m.def("write_gmsh", py::overload_cast<const Mesh&, const std::string&>(&write_gmsh), py::arg("mesh"), py::arg("path"));

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def_readwrite("kn", &PhysicalParams::kn)
      .def_readwrite("chi_tilde", &PhysicalParams::chi_tilde);
  py::class_<StabilizationParams>(m, "StabilizationParams")
      .def_readwrite("enabled", &StabilizationParams::enabled)
      .def_readwrite("delta_theta", &StabilizationParams::delta_theta)
      .def_readwrite("delta_u", &StabilizationParams::delta_u)
      .def_readwrite("delta_p", &StabilizationParams::delta_p);
  py::class_<ProblemData>(m, "ProblemData")
      .def_readwrite("physics", &ProblemData::physics)
      .def_readwrite("stabilization", &ProblemData::stabilization)
      .def("tags", [](const ProblemData& d) {
        std::vector<int> out;
        for (const auto& [tag, _] : d.boundary) out.push_back(tag);
        return out;
      })
      .def("epsilon_w", [](const ProblemData& d, int tag) { return d.bc(tag).epsilon_w; })
      .def("pressure_floating", &ProblemData::pressure_floating);
  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def_readwrite("name", &ProblemSpec::name)
      .def_readwrite("degree_high", &ProblemSpec::degree_high)
      .def_readwrite("degree_low", &ProblemSpec::degree_low)
      .def_readwrite("data", &ProblemSpec::data)
      .def("set_mesh_size", [](ProblemSpec& s, double h) { s.mesh.h = h; })
      .def("build_mesh", [](const ProblemSpec& s) { return std::make_shared<Mesh>(s.mesh.build()); })
      .def("validate", [](const ProblemSpec& s) {
        const auto r = validate(s);
        return py::make_tuple(r.errors, r.warnings);
      });

  m.def("case_ring_flow", &case_ring_flow, py::arg("h") = 0.1);
  m.def("case_channel", &case_channel, py::arg("kn") = 0.25, py::arg("h") = 0.0274);
  m.def("case_knudsen_pump", &case_knudsen_pump, py::arg("mesh_file") = "pump_h0.125.msh");
  m.def("case_thermal_edge", &case_thermal_edge, py::arg("level") = 0);
  m.def("load_config", [](const std::string& path) { return load_run_config(path).spec; }, py::arg("path"));
  m.def("parse_config", [](const std::string& text) { return parse_run_config(ConfigFile::parse_string(text)).spec; },
        py::arg("text"));

  py::class_<Solution>(m, "Solution")
      .def_property_readonly("coefficients", &Solution::coefficients)
      .def_property_readonly("num_dofs", [](const Solution& s) { return s.space().size(); })
      .def("evaluate",
           [](const Solution& s, const std::string& comp, std::array<double, 2> p) {
             return s.evaluate(component_from_name(comp), to_point(p));
           },
           py::arg("component"), py::arg("point"))
      .def("vertex_values", [](const Solution& s, const std::string& comp) {
        const Component c = component_from_name(comp);
        Eigen::VectorXd v(s.mesh().num_vertices());
        for (int i = 0; i < v.size(); ++i) v(i) = s.vertex_value(c, i);
        return v;
      })
      .def("mass_flow", [](const Solution& s, int tag) { return mass_flow(s, tag); }, py::arg("tag"))
      .def("line_sample",
           [](const Solution& s, std::array<double, 2> p0, std::array<double, 2> p1, int n, const std::string& comp) {
             const auto prof = line_sample(s, to_point(p0), to_point(p1), n, component_from_name(comp));
             Eigen::MatrixXd out(prof.size(), 2);
             for (std::size_t i = 0; i < prof.size(); ++i) {
               out(i, 0) = prof[i].arc;
               out(i, 1) = prof[i].value;
             }
             return out;
           },
           py::arg("p0"), py::arg("p1"), py::arg("n"), py::arg("component"))
      .def("write_vtk", py::overload_cast<const Solution&, const std::string&>(&write_vtk), py::arg("path"));

  py::class_<SolveRun>(m, "SolveRun")
      .def_readonly("solution", &SolveRun::solution)
      .def_property_readonly("residual", [](const SolveRun& r) { return r.result.residual; })
      .def_property_readonly("rcond", [](const SolveRun& r) { return r.result.rcond; })
      .def_readonly("dofs", &SolveRun::dofs)
      .def_property_readonly("timings", [](const SolveRun& r) {
        return py::dict(py::arg("setup") = r.timings.setup, py::arg("assembly") = r.timings.assembly,
                        py::arg("solve") = r.timings.solve);
      });

  m.def("solve",
        [](const ProblemSpec& spec, std::shared_ptr<Mesh> mesh, int threads) {
          AssemblyOptions opts;
          opts.threads = threads;
          py::gil_scoped_release release;
          return run_solve(spec, mesh, opts);
        },
        py::arg("spec"), py::arg("mesh") = nullptr, py::arg("threads") = 0);

  m.def("assemble",
        [](const ProblemSpec& spec, std::shared_ptr<Mesh> mesh) {
          if (!mesh) mesh = std::make_shared<Mesh>(spec.mesh.build());
          auto space = std::make_shared<const MixedSpace>(mesh, spec.degree_high, spec.degree_low);
          const AssembledSystem sys = assemble(space, spec.data);
          return py::make_tuple(Eigen::SparseMatrix<double>(sys.matrix), sys.rhs);
        },
        py::arg("spec"), py::arg("mesh") = nullptr);

  m.def("compare",
        [](const Solution& s, const Solution& ref) {
          const ErrorReport r = compare(s, ref);
          py::dict out;
          for (int c = 0; c < kNumComponents; ++c) {
            const char* name = component_name(static_cast<Component>(c));
            out[py::str(std::string(name) + "_L_2")] = r.l2[c];
            out[py::str(std::string(name) + "_l_inf")] = r.linf[c];
          }
          return out;
        },
        py::arg("solution"), py::arg("reference"));

  m.def("kn_sweep",
        [](const ProblemSpec& spec, const std::vector<double>& kn, int tag) {
          std::vector<SweepPoint> pts;
          {
            py::gil_scoped_release release;
            pts = run_kn_sweep(spec, kn, tag);
          }
          std::vector<std::pair<double, double>> out;
          for (const auto& p : pts) out.emplace_back(p.kn, p.mass_flow);
          return out;
        },
        py::arg("spec"), py::arg("kn"), py::arg("tag") = 2);
  m.def("fitted_slope", &fitted_slope, py::arg("h"), py::arg("e"));
  m.def("pump_mean_velocity", &pump_mean_velocity, py::arg("solution"), py::arg("n") = 400);

  m.def("stf3d2", [](const Tensor2& t) { return stf3d2(t); }, py::arg("t"));
}
