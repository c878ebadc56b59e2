// Writes the MSH fixtures under data/meshes.
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>

#include "r13fem/mesh.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data/meshes";
  std::filesystem::create_directories(dir);

  auto emit = [&](const std::string& name, const r13::Mesh& mesh) {
    r13::write_gmsh(mesh, (dir / name).string());
    std::cout << name << ": " << mesh.num_cells() << " cells, h_max " << mesh.max_edge_length() << "\n";
  };

  // Racetrack pump: L = 1, R1 = 1/2, R2 = 2. Halving steps, then a sqrt(2) step.
  for (const auto& [name, h] : {std::pair{"pump_h0.25.msh", 0.25}, {"pump_h0.125.msh", 0.125},
                                {"pump_h0.0625.msh", 0.0625}, {"pump_h0.0442.msh", 0.0625 / std::sqrt(2.0)},
                                {"pump_h0.03125.msh", 0.03125}}) {
    emit(name, r13::generate_racetrack(1.0, 0.5, 2.0, h));
  }
  // Beam in chamber: L = 8, l = 2, d = 1; level s halves the base size s times.
  for (int s = 0; s <= 1; ++s) {
    const double h = 0.4 / (1 << s);
    emit("edge_s" + std::to_string(s) + ".msh", r13::generate_beam_chamber(8.0, 2.0, 1.0, h, 4.0));
  }
  return 0;
}
