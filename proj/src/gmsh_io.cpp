#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "r13fem/error.hpp"
#include "r13fem/mesh.hpp"

namespace r13 {

namespace {

std::string next_line(std::istream& in, int& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return line;
  }
  throw MeshError("unexpected end of MSH file");
}

void expect_section_end(std::istream& in, int& line_no, const std::string& name) {
  const std::string line = next_line(in, line_no);
  if (line.rfind("$End" + name, 0) != 0) {
    throw MeshError("line " + std::to_string(line_no) + ": expected $End" + name);
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Mesh read_gmsh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  return read_gmsh(in);
}

Mesh read_gmsh(std::istream& in) {
  int line_no = 0;
  bool have_format = false;
  std::vector<Point> vertices;
  std::unordered_map<long, int> node_index;
  std::vector<std::array<long, 3>> raw_cells;
  std::vector<std::pair<std::array<long, 2>, int>> raw_lines;

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "$MeshFormat") {
      std::istringstream fmt(next_line(in, line_no));
      std::string version;
      int file_type = -1;
      fmt >> version >> file_type;
      if (version.empty() || version[0] != '2') {
        throw MeshError("unsupported MSH version '" + version + "' (only 2.x is read)");
      }
      if (file_type != 0) throw MeshError("binary MSH files are not supported");
      expect_section_end(in, line_no, "MeshFormat");
      have_format = true;
    } else if (line == "$Nodes") {
      if (!have_format) throw MeshError("$Nodes before $MeshFormat");
      const long n = std::stol(next_line(in, line_no));
      vertices.reserve(n);
      for (long k = 0; k < n; ++k) {
        std::istringstream rec(next_line(in, line_no));
        long id;
        double x, y, z;
        if (!(rec >> id >> x >> y >> z)) throw MeshError("line " + std::to_string(line_no) + ": bad node record");
        if (!node_index.emplace(id, static_cast<int>(vertices.size())).second) {
          throw MeshError("line " + std::to_string(line_no) + ": duplicate node id");
        }
        vertices.push_back({x, y});
      }
      expect_section_end(in, line_no, "Nodes");
    } else if (line == "$Elements") {
      if (!have_format) throw MeshError("$Elements before $MeshFormat");
      const long n = std::stol(next_line(in, line_no));
      for (long k = 0; k < n; ++k) {
        std::istringstream rec(next_line(in, line_no));
        long id;
        int type, ntags;
        if (!(rec >> id >> type >> ntags)) throw MeshError("line " + std::to_string(line_no) + ": bad element record");
        std::vector<long> tags(ntags);
        for (auto& t : tags) rec >> t;
        const int physical = ntags > 0 ? static_cast<int>(tags[0]) : 0;
        if (type == 1) {
          std::array<long, 2> v;
          if (!(rec >> v[0] >> v[1])) throw MeshError("line " + std::to_string(line_no) + ": bad line element");
          raw_lines.push_back({v, physical});
        } else if (type == 2) {
          std::array<long, 3> v;
          if (!(rec >> v[0] >> v[1] >> v[2])) throw MeshError("line " + std::to_string(line_no) + ": bad triangle");
          raw_cells.push_back(v);
        } else if (type == 15) {
          continue;  // points carry no information we need
        } else {
          throw MeshError("line " + std::to_string(line_no) + ": unsupported element type " + std::to_string(type));
        }
      }
      expect_section_end(in, line_no, "Elements");
    } else if (line[0] == '$' && line.rfind("$End", 0) != 0) {
      // Skip unknown sections such as $PhysicalNames.
      const std::string name = line.substr(1);
      std::string skip;
      while (true) {
        skip = next_line(in, line_no);
        if (skip == "$End" + name) break;
      }
    }
  }
  if (!have_format) throw MeshError("missing $MeshFormat section");

  auto resolve = [&](long id) {
    auto it = node_index.find(id);
    if (it == node_index.end()) throw MeshError("element references unknown node " + std::to_string(id));
    return it->second;
  };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(raw_cells.size());
  for (const auto& c : raw_cells) cells.push_back({resolve(c[0]), resolve(c[1]), resolve(c[2])});
  std::vector<TaggedSegment> segments;
  segments.reserve(raw_lines.size());
  for (const auto& [v, tag] : raw_lines) segments.push_back({{resolve(v[0]), resolve(v[1])}, tag});
  return Mesh(std::move(vertices), std::move(cells), segments);
}

void write_gmsh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file '" + path + "'");
  write_gmsh(mesh, out);
  if (!out) throw MeshError("failed writing mesh file '" + path + "'");
}

void write_gmsh(const Mesh& mesh, std::ostream& out) {
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << mesh.num_vertices() << "\n";
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    const Point p = mesh.vertices()[i];
    out << i + 1 << ' ' << format_double(p.x) << ' ' << format_double(p.y) << " 0\n";
  }
  out << "$EndNodes\n";
  const auto& be = mesh.boundary_edges();
  out << "$Elements\n" << be.size() + mesh.cells().size() << "\n";
  long id = 1;
  for (const auto& e : be) {
    out << id++ << " 1 2 " << e.tag << ' ' << e.tag << ' ' << e.v[0] + 1 << ' ' << e.v[1] + 1 << "\n";
  }
  for (const auto& c : mesh.cells()) {
    out << id++ << " 2 2 0 0 " << c[0] + 1 << ' ' << c[1] + 1 << ' ' << c[2] + 1 << "\n";
  }
  out << "$EndElements\n";
}

void write_mesh_dump(const Mesh& mesh, std::ostream& out) {
  out << "VERTICES " << mesh.num_vertices() << "\n";
  for (const auto& p : mesh.vertices()) out << format_double(p.x) << ' ' << format_double(p.y) << "\n";
  out << "CELLS " << mesh.num_cells() << "\n";
  for (const auto& c : mesh.cells()) out << c[0] << ' ' << c[1] << ' ' << c[2] << "\n";
  out << "BOUNDARY " << mesh.boundary_edges().size() << "\n";
  for (const auto& e : mesh.boundary_edges()) out << e.v[0] << ' ' << e.v[1] << ' ' << e.tag << "\n";
}

}  // namespace r13
