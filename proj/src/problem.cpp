#include "r13fem/problem.hpp"

#include <cstdio>

#include "r13fem/error.hpp"

namespace r13 {

ScalarField::ScalarField(double value) : constant_(value) {}

ScalarField::ScalarField(Expr expr) {
  if (expr.is_constant()) {
    constant_ = expr.eval(0.0, 0.0);
  } else {
    expr_ = std::move(expr);
  }
  description_ = expr_ ? expr_->to_string() : std::string();
}

ScalarField ScalarField::function(std::function<double(Point)> fn, std::string description) {
  ScalarField f;
  f.fn_ = std::move(fn);
  f.description_ = std::move(description);
  return f;
}

double ScalarField::operator()(Point p) const {
  if (fn_) return fn_(p);
  if (expr_) return expr_->eval(p.x, p.y);
  return constant_;
}

std::string ScalarField::description() const {
  if (!description_.empty()) return description_;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", constant_);
  return buf;
}

const BoundaryData& ProblemData::bc(int tag) const {
  auto it = boundary.find(tag);
  if (it == boundary.end()) throw ValidationError("no boundary data for tag " + std::to_string(tag));
  return it->second;
}

double ProblemData::chi_tilde(int tag) const {
  auto it = boundary.find(tag);
  if (it != boundary.end() && it->second.chi_tilde) return *it->second.chi_tilde;
  return physics.chi_tilde;
}

bool ProblemData::pressure_floating() const {
  for (const auto& [tag, bc] : boundary) {
    if (bc.epsilon_w != 0.0) return false;
  }
  return true;
}

}  // namespace r13
