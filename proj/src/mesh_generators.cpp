#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "r13fem/error.hpp"
#include "r13fem/mesh.hpp"

namespace r13 {

namespace {

constexpr double kPi = std::numbers::pi;

// One closed layer of a ring-like mesh. `t` is a periodic parameter in [0, period)
// shared by all layers so that points with equal t are radially aligned.
struct Layer {
  std::vector<int> vertex;
  std::vector<double> t;
};

// Triangulates the strip between two closed layers by merging their parameters.
void stitch(const Layer& a, const Layer& b, double period, std::vector<std::array<int, 3>>& cells) {
  const std::size_t na = a.vertex.size(), nb = b.vertex.size();
  std::size_t i = 0, j = 0;
  auto param = [period](const Layer& l, std::size_t k) {
    const std::size_t n = l.t.size();
    return l.t[k % n] + period * static_cast<double>(k / n);
  };
  while (i < na || j < nb) {
    const double ta = param(a, i + 1);
    const double tb = param(b, j + 1);
    const bool advance_a = j >= nb || (i < na && ta <= tb);
    if (advance_a) {
      cells.push_back({a.vertex[i % na], a.vertex[(i + 1) % na], b.vertex[j % nb]});
      ++i;
    } else {
      cells.push_back({a.vertex[i % na], b.vertex[(j + 1) % nb], b.vertex[j % nb]});
      ++j;
    }
  }
}

void add_loop_segments(const Layer& l, const std::function<int(double)>& tag_of,
                       std::vector<TaggedSegment>& segments, double period) {
  const std::size_t n = l.vertex.size();
  for (std::size_t k = 0; k < n; ++k) {
    double t0 = l.t[k];
    double t1 = k + 1 < n ? l.t[k + 1] : period;
    segments.push_back({{l.vertex[k], l.vertex[(k + 1) % n]}, tag_of(0.5 * (t0 + t1))});
  }
}

// Grid line positions on [a, b]: spacing h away from the ends, h / grading at
// ends flagged as refined, linear transition over `blend`.
std::vector<double> graded_lines(double a, double b, double h, double grading, bool refine_a,
                                 bool refine_b, double blend) {
  const double h_fine = h / grading;
  auto size = [&](double x) {
    double d = std::numeric_limits<double>::max();
    if (refine_a) d = std::min(d, x - a);
    if (refine_b) d = std::min(d, b - x);
    return h_fine + (h - h_fine) * std::clamp(d / blend, 0.0, 1.0);
  };
  std::vector<double> x{a};
  while (x.back() < b) x.push_back(x.back() + size(x.back()));
  // Snap to b by dropping the last overshoot if it is tiny and rescaling.
  if (x.size() > 2 && (x.back() - b) > 0.5 * (x.back() - x[x.size() - 2])) x.pop_back();
  const double scale = (b - a) / (x.back() - a);
  for (double& v : x) v = a + (v - a) * scale;
  x.back() = b;
  return x;
}

}  // namespace

Mesh generate_rectangle(double width, double height, double target_h) {
  if (!(width > 0) || !(height > 0) || !(target_h > 0)) {
    throw MeshError("rectangle dimensions and target size must be positive");
  }
  const int nx = std::max(1, static_cast<int>(std::ceil(width / target_h - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil(height / target_h - 1e-9)));
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      vertices.push_back({width * i / nx, height * j / ny});
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      if ((i + j) % 2 == 0) {
        cells.push_back({v00, v10, v11});
        cells.push_back({v00, v11, v01});
      } else {
        cells.push_back({v00, v10, v01});
        cells.push_back({v10, v11, v01});
      }
    }
  }
  std::vector<TaggedSegment> segments;
  for (int i = 0; i < nx; ++i) {
    segments.push_back({{id(i, 0), id(i + 1, 0)}, 1});
    segments.push_back({{id(i, ny), id(i + 1, ny)}, 3});
  }
  for (int j = 0; j < ny; ++j) {
    segments.push_back({{id(nx, j), id(nx, j + 1)}, 2});
    segments.push_back({{id(0, j), id(0, j + 1)}, 4});
  }
  return Mesh(std::move(vertices), std::move(cells), segments);
}

Mesh generate_annulus(double r_inner, double r_outer, double target_h) {
  if (!(r_inner > 0) || !(r_outer > r_inner) || !(target_h > 0)) {
    throw MeshError("annulus needs 0 < r_inner < r_outer and a positive target size");
  }
  const int n_rings = std::max(1, static_cast<int>(std::ceil((r_outer - r_inner) / target_h - 1e-9)));
  std::vector<Point> vertices;
  std::vector<Layer> layers;
  for (int k = 0; k <= n_rings; ++k) {
    const double r = k == n_rings ? r_outer : r_inner + (r_outer - r_inner) * k / n_rings;
    const int m = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * r / target_h - 1e-9)));
    // Stagger alternate rings by half a step for better shaped triangles.
    const double shift = (k % 2) * 0.5 / m;
    Layer layer;
    for (int j = 0; j < m; ++j) {
      const double t = (j + shift) / m;
      layer.vertex.push_back(static_cast<int>(vertices.size()));
      layer.t.push_back(t);
      vertices.push_back({r * std::cos(2.0 * kPi * t), r * std::sin(2.0 * kPi * t)});
    }
    layers.push_back(std::move(layer));
  }
  std::vector<std::array<int, 3>> cells;
  for (int k = 0; k < n_rings; ++k) stitch(layers[k], layers[k + 1], 1.0, cells);
  std::vector<TaggedSegment> segments;
  add_loop_segments(layers.front(), [](double) { return 1; }, segments, 1.0);
  add_loop_segments(layers.back(), [](double) { return 2; }, segments, 1.0);
  return Mesh(std::move(vertices), std::move(cells), segments);
}

Mesh generate_racetrack(double half_length, double r_inner, double r_outer, double target_h) {
  if (!(half_length > 0) || !(r_inner > 0) || !(r_outer > r_inner) || !(target_h > 0)) {
    throw MeshError("racetrack needs positive half length, 0 < r_inner < r_outer and a positive target size");
  }
  const double L = half_length;
  // Parameter t in [0,4): right arc [0,1), top straight [1,2), left arc [2,3), bottom [3,4).
  auto position = [L](double rho, double t) -> Point {
    if (t < 1.0) {
      const double phi = -0.5 * kPi + kPi * t;
      return {L + rho * std::cos(phi), rho * std::sin(phi)};
    }
    if (t < 2.0) return {L - 2.0 * L * (t - 1.0), rho};
    if (t < 3.0) {
      const double phi = 0.5 * kPi + kPi * (t - 2.0);
      return {-L + rho * std::cos(phi), rho * std::sin(phi)};
    }
    return {-L + 2.0 * L * (t - 3.0), -rho};
  };
  const int n_layers = std::max(1, static_cast<int>(std::ceil((r_outer - r_inner) / target_h - 1e-9)));
  const int n_straight = std::max(1, static_cast<int>(std::ceil(2.0 * L / target_h - 1e-9)));
  std::vector<Point> vertices;
  std::vector<Layer> layers;
  for (int k = 0; k <= n_layers; ++k) {
    const double rho = k == n_layers ? r_outer : r_inner + (r_outer - r_inner) * k / n_layers;
    const int n_arc = std::max(4, static_cast<int>(std::ceil(kPi * rho / target_h - 1e-9)));
    Layer layer;
    for (int piece = 0; piece < 4; ++piece) {
      const int n = piece % 2 == 0 ? n_arc : n_straight;
      for (int j = 0; j < n; ++j) {
        const double t = piece + static_cast<double>(j) / n;
        layer.vertex.push_back(static_cast<int>(vertices.size()));
        layer.t.push_back(t);
        Point p = position(rho, t);
        // Junction vertices sit exactly on the straight/arc boundary.
        if (j == 0) p.x = (piece == 0 || piece == 1) ? L : -L;
        vertices.push_back(p);
      }
    }
    layers.push_back(std::move(layer));
  }
  std::vector<std::array<int, 3>> cells;
  for (int k = 0; k < n_layers; ++k) stitch(layers[k], layers[k + 1], 4.0, cells);
  std::vector<TaggedSegment> segments;
  add_loop_segments(layers.front(), [](double t) { return 1 + static_cast<int>(t); }, segments, 4.0);
  add_loop_segments(layers.back(), [](double t) { return 5 + static_cast<int>(t); }, segments, 4.0);
  return Mesh(std::move(vertices), std::move(cells), segments);
}

Mesh generate_beam_chamber(double chamber, double beam, double offset, double target_h, double grading) {
  if (!(chamber > 0) || !(beam > 0) || !(offset > 0) || offset + beam >= chamber || !(target_h > 0) ||
      !(grading >= 1.0)) {
    throw MeshError("beam must lie strictly inside the chamber; sizes must be positive and grading >= 1");
  }
  const double b0 = offset, b1 = offset + beam;
  const double blend = std::min(1.0, 0.5 * beam);
  std::vector<double> lines = graded_lines(0.0, b0, target_h, grading, true, true, blend);
  for (double v : graded_lines(b0, b1, target_h, grading, true, true, blend)) {
    if (v > lines.back()) lines.push_back(v);
  }
  for (double v : graded_lines(b1, chamber, target_h, grading, true, true, blend)) {
    if (v > lines.back()) lines.push_back(v);
  }
  const int n = static_cast<int>(lines.size());
  auto inside_beam = [&](int i, int j) {
    const double xm = 0.5 * (lines[i] + lines[i + 1]), ym = 0.5 * (lines[j] + lines[j + 1]);
    return xm > b0 && xm < b1 && ym > b0 && ym < b1;
  };
  std::vector<Point> vertices;
  std::vector<int> id(static_cast<std::size_t>(n) * n, -1);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double x = lines[i], y = lines[j];
      if (x > b0 && x < b1 && y > b0 && y < b1) continue;
      id[j * n + i] = static_cast<int>(vertices.size());
      vertices.push_back({x, y});
    }
  }
  auto at = [&](int i, int j) { return id[j * n + i]; };
  std::vector<std::array<int, 3>> cells;
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      if (inside_beam(i, j)) continue;
      const int v00 = at(i, j), v10 = at(i + 1, j), v01 = at(i, j + 1), v11 = at(i + 1, j + 1);
      // Diagonals point away from the beam centre so that no cell has all
      // three vertices on a beam corner.
      const double xm = 0.5 * (lines[i] + lines[i + 1]) - 0.5 * (b0 + b1);
      const double ym = 0.5 * (lines[j] + lines[j + 1]) - 0.5 * (b0 + b1);
      if (xm * ym > 0) {
        cells.push_back({v00, v10, v11});
        cells.push_back({v00, v11, v01});
      } else {
        cells.push_back({v00, v10, v01});
        cells.push_back({v10, v11, v01});
      }
    }
  }
  std::vector<TaggedSegment> segments;
  for (int k = 0; k + 1 < n; ++k) {
    segments.push_back({{at(k, 0), at(k + 1, 0)}, 1});
    segments.push_back({{at(k, n - 1), at(k + 1, n - 1)}, 1});
    segments.push_back({{at(0, k), at(0, k + 1)}, 1});
    segments.push_back({{at(n - 1, k), at(n - 1, k + 1)}, 1});
  }
  const int i0 = static_cast<int>(std::find(lines.begin(), lines.end(), b0) - lines.begin());
  const int i1 = static_cast<int>(std::find(lines.begin(), lines.end(), b1) - lines.begin());
  if (i0 >= n || i1 >= n) throw MeshError("beam edges are not grid lines");
  for (int k = i0; k < i1; ++k) {
    segments.push_back({{at(k, i0), at(k + 1, i0)}, 2});
    segments.push_back({{at(k, i1), at(k + 1, i1)}, 2});
    segments.push_back({{at(i0, k), at(i0, k + 1)}, 2});
    segments.push_back({{at(i1, k), at(i1, k + 1)}, 2});
  }
  return Mesh(std::move(vertices), std::move(cells), segments);
}

}  // namespace r13
