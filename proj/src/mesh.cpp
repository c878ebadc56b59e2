#include "r13fem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "r13fem/error.hpp"

namespace r13 {

double norm(Point a) { return std::hypot(a.x, a.y); }

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
           const std::vector<TaggedSegment>& boundary_segments)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = num_vertices();
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    auto& cell = cells_[c];
    for (int v : cell) {
      if (v < 0 || v >= nv) throw MeshError("cell " + std::to_string(c) + " references missing vertex");
    }
    if (cell[0] == cell[1] || cell[1] == cell[2] || cell[0] == cell[2]) {
      throw MeshError("cell " + std::to_string(c) + " has repeated vertices");
    }
    const double a2 = cross(vertices_[cell[1]] - vertices_[cell[0]], vertices_[cell[2]] - vertices_[cell[0]]);
    if (a2 == 0.0) throw MeshError("cell " + std::to_string(c) + " is degenerate");
    if (a2 < 0.0) std::swap(cell[1], cell[2]);
  }

  // Edge table in order of first appearance (deterministic).
  std::unordered_map<std::uint64_t, int> edge_index;
  edge_index.reserve(cells_.size() * 2);
  std::vector<std::array<int, 2>> edge_cells;
  cell_edges_.resize(cells_.size());
  for (int c = 0; c < num_cells(); ++c) {
    for (int k = 0; k < 3; ++k) {
      const int a = cells_[c][k];
      const int b = cells_[c][(k + 1) % 3];
      auto [it, inserted] = edge_index.try_emplace(edge_key(a, b), static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back({std::min(a, b), std::max(a, b)});
        edge_cells.push_back({c, -1});
      } else {
        auto& ec = edge_cells[it->second];
        if (ec[1] != -1) {
          throw MeshError("non-manifold edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        }
        ec[1] = c;
      }
      cell_edges_[c][k] = it->second;
    }
  }

  neighbors_.assign(cells_.size(), {-1, -1, -1});
  for (int c = 0; c < num_cells(); ++c) {
    for (int k = 0; k < 3; ++k) {
      const auto& ec = edge_cells[cell_edges_[c][k]];
      neighbors_[c][k] = ec[0] == c ? ec[1] : ec[0];
    }
  }

  std::unordered_map<std::uint64_t, int> tag_of;
  for (const auto& s : boundary_segments) {
    auto it = edge_index.find(edge_key(s.v[0], s.v[1]));
    if (it == edge_index.end() || edge_cells[it->second][1] != -1) {
      throw MeshError("boundary segment (" + std::to_string(s.v[0]) + ", " + std::to_string(s.v[1]) +
                      ") is not a boundary edge of the mesh");
    }
    if (s.tag <= 0) throw MeshError("boundary tags must be positive");
    auto [t, inserted] = tag_of.try_emplace(it->first, s.tag);
    if (!inserted && t->second != s.tag) throw MeshError("boundary edge carries two different tags");
  }

  for (int c = 0; c < num_cells(); ++c) {
    for (int k = 0; k < 3; ++k) {
      const int e = cell_edges_[c][k];
      const auto& ec = edge_cells[e];
      const int a = cells_[c][k];
      const int b = cells_[c][(k + 1) % 3];
      if (ec[1] == -1) {
        auto t = tag_of.find(edge_key(a, b));
        if (t == tag_of.end()) {
          throw MeshError("boundary edge (" + std::to_string(a) + ", " + std::to_string(b) + ") has no tag");
        }
        boundary_edges_.push_back({{a, b}, c, t->second, e});
      } else if (ec[0] == c && ec[0] < ec[1]) {
        interior_edges_.push_back({{a, b}, c, ec[1], e});
      } else if (ec[1] == c && ec[1] < ec[0]) {
        interior_edges_.push_back({{a, b}, c, ec[0], e});
      }
    }
  }
  std::sort(interior_edges_.begin(), interior_edges_.end(),
            [](const InteriorEdge& l, const InteriorEdge& r) { return l.edge < r.edge; });
  std::sort(boundary_edges_.begin(), boundary_edges_.end(),
            [](const BoundaryEdge& l, const BoundaryEdge& r) { return l.edge < r.edge; });
  build_locator();
}

void Mesh::build_locator() {
  if (cells_.empty()) return;
  Point lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Point hi{-lo.x, -lo.y};
  for (const auto& p : vertices_) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const double wx = std::max(hi.x - lo.x, 1e-300);
  const double wy = std::max(hi.y - lo.y, 1e-300);
  const double bins = std::max(1.0, static_cast<double>(cells_.size()) / 2.0);
  grid_nx_ = std::clamp(static_cast<int>(std::sqrt(bins * wx / wy)), 1, 4096);
  grid_ny_ = std::clamp(static_cast<int>(bins / grid_nx_), 1, 4096);
  grid_min_ = lo;
  grid_dx_ = wx / grid_nx_;
  grid_dy_ = wy / grid_ny_;

  auto bin_range = [&](int c) {
    const auto& cell = cells_[c];
    double x0 = vertices_[cell[0]].x, x1 = x0, y0 = vertices_[cell[0]].y, y1 = y0;
    for (int k = 1; k < 3; ++k) {
      x0 = std::min(x0, vertices_[cell[k]].x);
      x1 = std::max(x1, vertices_[cell[k]].x);
      y0 = std::min(y0, vertices_[cell[k]].y);
      y1 = std::max(y1, vertices_[cell[k]].y);
    }
    auto ix = [&](double x) { return std::clamp(static_cast<int>((x - grid_min_.x) / grid_dx_), 0, grid_nx_ - 1); };
    auto iy = [&](double y) { return std::clamp(static_cast<int>((y - grid_min_.y) / grid_dy_), 0, grid_ny_ - 1); };
    return std::array<int, 4>{ix(x0), ix(x1), iy(y0), iy(y1)};
  };

  std::vector<int> count(static_cast<std::size_t>(grid_nx_) * grid_ny_ + 1, 0);
  for (int c = 0; c < num_cells(); ++c) {
    const auto r = bin_range(c);
    for (int j = r[2]; j <= r[3]; ++j)
      for (int i = r[0]; i <= r[1]; ++i) ++count[j * grid_nx_ + i + 1];
  }
  for (std::size_t i = 1; i < count.size(); ++i) count[i] += count[i - 1];
  grid_start_ = count;
  grid_cells_.resize(count.back());
  for (int c = 0; c < num_cells(); ++c) {
    const auto r = bin_range(c);
    for (int j = r[2]; j <= r[3]; ++j)
      for (int i = r[0]; i <= r[1]; ++i) grid_cells_[count[j * grid_nx_ + i]++] = c;
  }
}

int Mesh::locate_in_grid(Point p) const {
  const int ix = std::clamp(static_cast<int>(std::floor((p.x - grid_min_.x) / grid_dx_)), 0, grid_nx_ - 1);
  const int iy = std::clamp(static_cast<int>(std::floor((p.y - grid_min_.y) / grid_dy_)), 0, grid_ny_ - 1);
  int best = -1;
  double best_min = -std::numeric_limits<double>::infinity();
  int found_ring = -1;
  const int max_ring = std::max(grid_nx_, grid_ny_);
  for (int ring = 0; ring <= max_ring; ++ring) {
    for (int j = iy - ring; j <= iy + ring; ++j) {
      if (j < 0 || j >= grid_ny_) continue;
      for (int i = ix - ring; i <= ix + ring; ++i) {
        if (i < 0 || i >= grid_nx_) continue;
        if (std::max(std::abs(i - ix), std::abs(j - iy)) != ring) continue;
        const int b = j * grid_nx_ + i;
        for (int k = grid_start_[b]; k < grid_start_[b + 1]; ++k) {
          const int c = grid_cells_[k];
          const auto l = barycentric(c, p);
          const double m = std::min({l[0], l[1], l[2]});
          if (m >= -1e-12) return c;
          if (m > best_min) {
            best_min = m;
            best = c;
          }
        }
      }
    }
    if (best >= 0 && found_ring < 0) found_ring = ring;
    if (found_ring >= 0 && ring >= found_ring + 1) break;
  }
  return best;
}

std::vector<int> Mesh::tags() const {
  std::set<int> t;
  for (const auto& e : boundary_edges_) t.insert(e.tag);
  return {t.begin(), t.end()};
}

double Mesh::signed_area(int c) const {
  const auto& cell = cells_[c];
  return 0.5 * cross(vertices_[cell[1]] - vertices_[cell[0]], vertices_[cell[2]] - vertices_[cell[0]]);
}

CellGeometry Mesh::cell_geometry(int c) const {
  const auto& cell = cells_[c];
  const Point p0 = vertices_[cell[0]];
  const Point e1 = vertices_[cell[1]] - p0;
  const Point e2 = vertices_[cell[2]] - p0;
  CellGeometry g{};
  g.origin = p0;
  g.jacobian = {{{e1.x, e2.x}, {e1.y, e2.y}}};
  const double det = e1.x * e2.y - e2.x * e1.y;
  // inverse(J)^T
  g.inverse_jacobian_t = {{{e2.y / det, -e1.y / det}, {-e2.x / det, e1.x / det}}};
  g.area = 0.5 * std::abs(det);
  const Point e3 = vertices_[cell[2]] - vertices_[cell[1]];
  g.diameter = std::max({norm(e1), norm(e2), norm(e3)});
  return g;
}

EdgeFrame Mesh::edge_frame(int a, int b, int c) const {
  const auto& cell = cells_[c];
  int opposite = -1;
  int hits = 0;
  for (int v : cell) {
    if (v == a || v == b) {
      ++hits;
    } else {
      opposite = v;
    }
  }
  if (hits != 2 || a == b) throw MeshError("edge is not an edge of the given cell");
  const Point d = vertices_[b] - vertices_[a];
  const double len = norm(d);
  if (len == 0.0) throw MeshError("degenerate edge");
  Point n{d.y / len, -d.x / len};
  if (dot(n, vertices_[opposite] - vertices_[a]) > 0.0) n = -1.0 * n;
  return {n, Point{-n.y, n.x}, len};
}

std::array<double, 3> Mesh::barycentric(int c, Point p) const {
  const auto& cell = cells_[c];
  const Point p0 = vertices_[cell[0]], p1 = vertices_[cell[1]], p2 = vertices_[cell[2]];
  const double det = cross(p1 - p0, p2 - p0);
  const double l1 = cross(p - p0, p2 - p0) / det;
  const double l2 = cross(p1 - p0, p - p0) / det;
  return {1.0 - l1 - l2, l1, l2};
}

int Mesh::locate(Point p, int hint) const {
  constexpr double tol = -1e-12;
  int c = (hint >= 0 && hint < num_cells()) ? hint : 0;
  for (int step = 0; step < num_cells(); ++step) {
    const auto l = barycentric(c, p);
    int worst = 0;
    for (int j = 1; j < 3; ++j) {
      if (l[j] < l[worst]) worst = j;
    }
    if (l[worst] >= tol) return c;
    // Local edge (worst+1)%3 is opposite vertex `worst`.
    const int next = neighbors_[c][(worst + 1) % 3];
    if (next < 0) break;
    c = next;
    if (step > 64) break;
  }
  return locate_in_grid(p);
}

double Mesh::max_edge_length() const {
  double h = 0.0;
  for (const auto& e : edges_) h = std::max(h, norm(vertices_[e[1]] - vertices_[e[0]]));
  return h;
}

}  // namespace r13
