#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "r13fem/fespace.hpp"

namespace r13 {

/// Discrete fields of a solved system.
class Solution {
 public:
  Solution(std::shared_ptr<const MixedSpace> space, Eigen::VectorXd coefficients);

  const MixedSpace& space() const { return *space_; }
  const std::shared_ptr<const MixedSpace>& space_ptr() const { return space_; }
  const Mesh& mesh() const { return space_->mesh(); }
  const Eigen::VectorXd& coefficients() const { return x_; }

  /// Value at reference point `ref` of `cell` (barycentric extrapolation is allowed).
  double evaluate_in_cell(Component c, int cell, std::array<double, 2> ref) const;
  Point gradient_in_cell(Component c, int cell, std::array<double, 2> ref) const;

  /// Value at a physical point. Points outside the mesh are extrapolated from the
  /// nearest cell. `hint` is the start cell of the search and receives the cell found.
  double evaluate(Component c, Point p, int* hint = nullptr) const;
  std::array<double, kNumComponents> evaluate_all(Point p, int* hint = nullptr) const;

  double vertex_value(Component c, int vertex) const { return x_(space_->dof(c, vertex)); }

 private:
  std::array<double, 2> reference_coordinates(int cell, Point p) const;
  std::shared_ptr<const MixedSpace> space_;
  Eigen::VectorXd x_;
};

using ScalarFunction = std::function<double(Point)>;

/// ||f_ex - f_h||_L2 / max over mesh vertices |f_ex|. When the normalizer is zero the
/// absolute error is returned and *absolute (if given) is set.
double error_l2(const Solution& s, Component c, const ScalarFunction& reference, bool* absolute = nullptr);
/// max over mesh vertices |f_ex - f_h| with the same normalizer.
double error_linf_nodes(const Solution& s, Component c, const ScalarFunction& reference, bool* absolute = nullptr);

/// Per-component errors of a solution against another (finer) solution.
struct ErrorReport {
  std::array<double, kNumComponents> l2{};
  std::array<double, kNumComponents> linf{};
};
ErrorReport compare(const Solution& s, const Solution& reference);

/// Line integral of u . n over all boundary edges with the given tag.
double mass_flow(const Solution& s, int tag);

struct ProfilePoint {
  double arc;  // distance from p0
  Point x;
  double value;
};
/// n_samples >= 2 equally spaced samples from p0 to p1 (both included).
std::vector<ProfilePoint> line_sample(const Solution& s, Point p0, Point p1, int n_samples, Component c);
/// Composite trapezoid rule over a profile.
double trapezoid(const std::vector<ProfilePoint>& profile, const std::function<double(double)>& map = nullptr);

struct Extremum {
  double position;
  double value;
  bool is_max;
};
/// End points plus strict interior local extrema, ordered by position.
std::vector<Extremum> extrema(const std::vector<ProfilePoint>& profile);

/// Legacy ASCII VTK with point data theta, p, u, s, sigma at the mesh vertices.
void write_vtk(const Solution& s, std::ostream& out);
void write_vtk(const Solution& s, const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
void write_csv(const CsvTable& table, std::ostream& out);
void write_csv(const CsvTable& table, const std::string& path);

}  // namespace r13
