#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "r13fem/expr.hpp"
#include "r13fem/mesh.hpp"

namespace r13 {

/// Scalar data of (x, y): a constant, a parsed expression or a C++ callable.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(double value);  // NOLINT: implicit on purpose, constants are the common case
  ScalarField(Expr expr);     // NOLINT

  static ScalarField function(std::function<double(Point)> fn, std::string description);

  double operator()(Point p) const;
  bool is_zero() const { return !fn_ && !expr_ && constant_ == 0.0; }
  std::string description() const;

 private:
  double constant_ = 0.0;
  std::optional<Expr> expr_;
  std::function<double(Point)> fn_;
  std::string description_;
};

struct PhysicalParams {
  double kn = 1.0;
  double chi_tilde = 1.0;  // default for tags without an override
};

struct StabilizationParams {
  bool enabled = true;
  double delta_theta = 1.0;
  double delta_u = 1.0;
  double delta_p = 0.1;
};

/// Wall or inflow data on one boundary tag.
struct BoundaryData {
  ScalarField theta_w;
  ScalarField u_t_w;
  ScalarField u_n_w;
  ScalarField p_w;
  double epsilon_w = 0.0;
  std::optional<double> chi_tilde;
};

struct SourceData {
  ScalarField m_dot;
  ScalarField r;
  ScalarField b_x;
  ScalarField b_y;
};

/// Everything the forms need besides mesh and space.
struct ProblemData {
  PhysicalParams physics;
  StabilizationParams stabilization;
  SourceData sources;
  std::map<int, BoundaryData> boundary;

  /// Throws ValidationError for tags without data.
  const BoundaryData& bc(int tag) const;
  double chi_tilde(int tag) const;
  /// True when every tag has epsilon_w == 0, so the pressure is only fixed up to a constant.
  bool pressure_floating() const;
};

}  // namespace r13
