#include "r13fem/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "r13fem/error.hpp"

namespace r13 {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string in_dir(const std::string& dir, const std::string& file) {
  const std::filesystem::path p(file);
  if (p.is_absolute()) return file;
  return (std::filesystem::path(dir) / p).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
}

RunConfig load(const CommandOptions& opts) {
  RunConfig rc = load_run_config(opts.config);
  if (opts.kn) {
    rc.spec.data.physics.kn = *opts.kn;
    const ValidationReport report = validate(rc.spec);
    if (!report.ok()) throw ValidationError(report.message());
  }
  return rc;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace

SolveRun run_solve(const ProblemSpec& spec, MeshPtr mesh, const AssemblyOptions& assembly,
                   const SolveOptions& solver) {
  auto t0 = Clock::now();
  if (!mesh) mesh = std::make_shared<const Mesh>(spec.mesh.build());
  const ValidationReport report = validate(spec, mesh.get());
  if (!report.ok()) throw ValidationError(report.message());
  auto space = std::make_shared<const MixedSpace>(mesh, spec.degree_high, spec.degree_low);
  RunTimings t;
  t.setup = since(t0);

  t0 = Clock::now();
  const AssembledSystem sys = assemble(space, spec.data, assembly);
  t.assembly = since(t0);

  t0 = Clock::now();
  SolveResult res = solve(sys, solver);
  t.solve = since(t0);

  Solution sol(space, res.x);
  return SolveRun{std::move(sol), std::move(res), t, space->size()};
}

std::vector<ConvergenceLevel> run_convergence(const ProblemSpec& base, const std::vector<MeshSource>& levels,
                                              const MeshSource& reference, std::ostream* log,
                                              const AssemblyOptions& assembly) {
  ProblemSpec spec = base;
  spec.mesh = reference;
  const SolveRun ref = run_solve(spec, nullptr, assembly);
  if (log) {
    *log << "reference: h=" << ref.solution.mesh().max_edge_length() << " dofs=" << ref.dofs
         << " residual=" << ref.result.residual << "\n";
  }
  std::vector<ConvergenceLevel> out;
  for (const MeshSource& src : levels) {
    spec.mesh = src;
    const SolveRun run = run_solve(spec, nullptr, assembly);
    ConvergenceLevel lvl;
    lvl.h = run.solution.mesh().max_edge_length();
    lvl.dofs = run.dofs;
    lvl.errors = compare(run.solution, ref.solution);
    if (log) {
      *log << "h=" << lvl.h << " dofs=" << lvl.dofs << " residual=" << run.result.residual
           << " theta_L2=" << lvl.errors.l2[static_cast<int>(Component::theta)] << "\n";
    }
    out.push_back(lvl);
  }
  return out;
}

double fitted_slope(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size() || h.size() < 2) throw Error("slope fit needs at least two matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const std::vector<ErrorColumn>& error_columns() {
  static const std::vector<ErrorColumn> cols = {
      {"theta", Component::theta},       {"sx", Component::s_x},          {"sy", Component::s_y},
      {"p", Component::p},               {"ux", Component::u_x},          {"uy", Component::u_y},
      {"sigmaxx", Component::sigma_xx},  {"sigmaxy", Component::sigma_xy}, {"sigmayy", Component::sigma_yy},
  };
  return cols;
}

CsvTable errors_table(const std::vector<ConvergenceLevel>& levels) {
  CsvTable t;
  t.header.push_back("h");
  for (const auto& c : error_columns()) {
    t.header.push_back(std::string(c.name) + "_L_2");
    t.header.push_back(std::string(c.name) + "_l_inf");
  }
  for (const auto& lvl : levels) {
    std::vector<double> row{lvl.h};
    for (const auto& c : error_columns()) {
      row.push_back(lvl.errors.l2[static_cast<int>(c.component)]);
      row.push_back(lvl.errors.linf[static_cast<int>(c.component)]);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<SweepPoint> run_kn_sweep(const ProblemSpec& base, const std::vector<double>& kn, int tag,
                                     std::ostream* log, const AssemblyOptions& assembly) {
  auto mesh = std::make_shared<const Mesh>(base.mesh.build());
  std::vector<SweepPoint> out;
  for (double k : kn) {
    ProblemSpec spec = base;
    spec.data.physics.kn = k;
    const SolveRun run = run_solve(spec, mesh, assembly);
    const double j = mass_flow(run.solution, tag);
    if (log) *log << "kn=" << k << " J=" << j << " residual=" << run.result.residual << "\n";
    out.push_back({k, j});
  }
  return out;
}

double pump_mean_velocity(const Solution& s, int n) {
  const auto profile = line_sample(s, {0.0, -2.0}, {0.0, -0.5}, n, Component::u_x);
  return 1.5 * trapezoid(profile, [](double v) { return std::abs(v); });
}

int cmd_solve(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig rc = load(opts);
    ensure_dir(opts.out_dir);
    const SolveRun run = run_solve(rc.spec);
    out << "case: " << (rc.spec.name.empty() ? "custom" : rc.spec.name) << "\n";
    out << "cells: " << run.solution.mesh().num_cells() << "\n";
    out << "dofs: " << run.dofs << "\n";
    out << "t_setup: " << run.timings.setup << " s\n";
    out << "t_a: " << run.timings.assembly << " s\n";
    out << "t_s: " << run.timings.solve << " s\n";
    out << "residual: " << run.result.residual << "\n";
    for (const auto& [tag, bc] : rc.spec.data.boundary) {
      out << "mass_flow[" << tag << "]: " << mass_flow(run.solution, tag) << "\n";
    }
    if (!rc.output.vtk.empty()) {
      const std::string path = in_dir(opts.out_dir, rc.output.vtk);
      write_vtk(run.solution, path);
      out << "wrote " << path << "\n";
    }
    if (!rc.output.csv.empty()) {
      CsvTable t;
      t.header = {"x", "y"};
      for (int c = 0; c < kNumComponents; ++c) t.header.push_back(component_name(static_cast<Component>(c)));
      const Mesh& mesh = run.solution.mesh();
      for (int v = 0; v < mesh.num_vertices(); ++v) {
        std::vector<double> row{mesh.vertices()[v].x, mesh.vertices()[v].y};
        for (int c = 0; c < kNumComponents; ++c) row.push_back(run.solution.vertex_value(static_cast<Component>(c), v));
        t.rows.push_back(std::move(row));
      }
      const std::string path = in_dir(opts.out_dir, rc.output.csv);
      write_csv(t, path);
      out << "wrote " << path << "\n";
    }
    return 0;
  });
}

int cmd_convergence(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig rc = load(opts);
    const auto& cv = rc.convergence;
    std::vector<MeshSource> levels;
    MeshSource reference = rc.spec.mesh;
    if (!cv.meshes.empty()) {
      if (cv.reference_mesh.empty()) throw ConfigError("[convergence] meshes needs reference_mesh");
      for (const auto& m : cv.meshes) {
        MeshSource src;
        src.kind = MeshSource::Kind::file;
        src.path = m;
        levels.push_back(src);
      }
      reference.kind = MeshSource::Kind::file;
      reference.path = cv.reference_mesh;
    } else {
      if (cv.h.empty() || !cv.reference_h) throw ConfigError("[convergence] needs 'h' and 'reference_h' (or mesh files)");
      if (rc.spec.mesh.kind == MeshSource::Kind::file) throw ConfigError("[convergence] 'h' needs a builtin mesh");
      for (double h : cv.h) {
        MeshSource src = rc.spec.mesh;
        src.h = h;
        levels.push_back(src);
      }
      reference.h = *cv.reference_h;
    }
    ensure_dir(opts.out_dir);
    const auto result = run_convergence(rc.spec, levels, reference, &out);
    const std::string path = in_dir(opts.out_dir, "errors.csv");
    write_csv(errors_table(result), path);
    if (result.size() >= 2) {
      std::vector<double> h;
      for (const auto& l : result) h.push_back(l.h);
      for (const auto& c : error_columns()) {
        std::vector<double> e;
        for (const auto& l : result) e.push_back(l.errors.l2[static_cast<int>(c.component)]);
        out << "slope " << c.name << "_L_2: " << fitted_slope(h, e) << "\n";
      }
    }
    out << "wrote " << path << "\n";
    return 0;
  });
}

int cmd_kn_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig rc = load(opts);
    std::vector<double> kn = rc.sweep.kn;
    if (opts.kn) kn = {*opts.kn};
    if (kn.empty()) throw ConfigError("[sweep] kn list is empty");
    ensure_dir(opts.out_dir);
    const auto points = run_kn_sweep(rc.spec, kn, rc.sweep.tag, &out);
    CsvTable t;
    t.header = {"kn", "mass_flow"};
    for (const auto& p : points) t.rows.push_back({p.kn, p.mass_flow});
    const std::string path = in_dir(opts.out_dir, rc.output.csv.empty() ? "kn_sweep.csv" : rc.output.csv);
    write_csv(t, path);
    out << "wrote " << path << "\n";
    return 0;
  });
}

int cmd_sample(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig rc = load(opts);
    if (rc.sample.segments.empty()) throw ConfigError("a [sample] section with 'from' and 'to' is required");
    ensure_dir(opts.out_dir);
    const SolveRun run = run_solve(rc.spec);
    out << "residual: " << run.result.residual << "\n";
    CsvTable t;
    t.header = {"segment", "arc", "x", "y"};
    for (Component c : rc.sample.components) t.header.push_back(component_name(c));
    for (std::size_t k = 0; k < rc.sample.segments.size(); ++k) {
      const auto& seg = rc.sample.segments[k];
      std::vector<std::vector<ProfilePoint>> cols;
      for (Component c : rc.sample.components) cols.push_back(line_sample(run.solution, seg.from, seg.to, rc.sample.n, c));
      for (int i = 0; i < rc.sample.n; ++i) {
        const Point x = seg.from + (static_cast<double>(i) / (rc.sample.n - 1)) * (seg.to - seg.from);
        std::vector<double> row{static_cast<double>(k), norm(x - seg.from), x.x, x.y};
        for (const auto& col : cols) row.push_back(col[i].value);
        t.rows.push_back(std::move(row));
      }
    }
    const std::string path = in_dir(opts.out_dir, rc.output.csv.empty() ? "samples.csv" : rc.output.csv);
    write_csv(t, path);
    out << "wrote " << path << "\n";
    return 0;
  });
}

}  // namespace r13
